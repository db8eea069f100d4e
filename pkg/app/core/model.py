# app/core/model.py
"""
Operaciones del modelo: armado de las configuraciones A/B, desintonías desde el
marco de laboratorio y vuelta de σ (marco rotado) a ρ.

Convención de fases:
- build_config pone toda la fase de lazo en el campo auxiliar (φ₂ = φ₃ = 0, φ₁ = −Φ),
  que es como se modula Φ en el experimento propuesto.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from app.core.errors import ValidationError
from app.models.domain import (
    ConfigurationKind,
    DriveSet,
    LabFrameSpec,
    SigmaState,
    normalize_phase,
)


def build_config(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    Phi: float,
    detuning: float,
) -> DriveSet:
    """
    DriveSet de una de las dos configuraciones.

    A: g3 = acoplamiento (Δ3 = 0), g2 = sonda (Δ2 = detuning), g1 = auxiliar (Δ1 = detuning).
    B: g2 = acoplamiento (Δ2 = 0), g3 = sonda (Δ3 = detuning), g1 = auxiliar (Δ1 = detuning).
    """
    for name, value in (("g_coupling", g_coupling), ("g_probe", g_probe), ("g_aux", g_aux)):
        if not math.isfinite(value) or value < 0:
            raise ValidationError(f"'{name}' debe ser finito y >= 0, recibido {value!r}")
    if not math.isfinite(detuning):
        raise ValidationError(f"'detuning' debe ser finito, recibido {detuning!r}")

    phi1 = -normalize_phase(Phi)
    kind = ConfigurationKind(kind)
    if kind is ConfigurationKind.A:
        return DriveSet(
            g1=g_aux, g2=g_probe, g3=g_coupling,
            phi1=phi1, phi2=0.0, phi3=0.0,
            delta1=detuning, delta2=detuning, delta3=0.0,
        )
    return DriveSet(
        g1=g_aux, g2=g_coupling, g3=g_probe,
        phi1=phi1, phi2=0.0, phi3=0.0,
        delta1=detuning, delta2=0.0, delta3=detuning,
    )


def probe_detuning(drives: DriveSet, kind: ConfigurationKind) -> float:
    """Desintonía de la sonda: Δ₂ en A, Δ₃ en B."""
    return drives.delta2 if ConfigurationKind(kind) is ConfigurationKind.A else drives.delta3


def detunings_from_lab(spec: LabFrameSpec) -> tuple[float, float, float]:
    """Δ₁ = E₃ − E₁ − ω₃₁, Δ₂ = E₂ − E₁ − ω₂₁, Δ₃ = E₃ − E₂ − ω₃₂."""
    return (
        spec.e3 - spec.e1 - spec.w31,
        spec.e2 - spec.e1 - spec.w21,
        spec.e3 - spec.e2 - spec.w32,
    )


def drives_from_lab(
    spec: LabFrameSpec,
    *,
    g1: float,
    g2: float,
    g3: float,
    phi1: float = 0.0,
    phi2: float = 0.0,
    phi3: float = 0.0,
) -> DriveSet:
    """DriveSet con las desintonías del marco de laboratorio (falla si no cierra el lazo)."""
    d1, d2, d3 = detunings_from_lab(spec)
    return DriveSet(g1=g1, g2=g2, g3=g3, phi1=phi1, phi2=phi2, phi3=phi3, delta1=d1, delta2=d2, delta3=d3)


def rho_from_sigma(state: SigmaState, drives: DriveSet) -> np.ndarray:
    """
    ρ₁₃ = σ₁₃e^{−iφ₁}, ρ₂₃ = σ₂₃e^{−iφ₃}, ρ₁₂ = σ₁₂e^{i(φ₃−φ₁)}; diagonal igual.

    Es la conjugación V σ V† con V = diag(v) unitaria diagonal,
    así que traza y espectro se conservan.
    """
    # ρ_ij = σ_ij · v_i · conj(v_j)
    v = np.array(
        [1.0, np.exp(-1j * (drives.phi3 - drives.phi1)), np.exp(1j * drives.phi1)],
        dtype=complex,
    )
    return state.matrix() * np.outer(v, v.conj())


# -------------------------
# Juegos de parámetros de las curvas de ganancia
# -------------------------

@dataclass(frozen=True)
class CurvePreset:
    """Parámetros de una curva de ganancia y la posición de su(s) mínimo(s)."""
    name: str
    kind: ConfigurationKind
    g_coupling: float
    g_probe: float
    g_aux: float
    Phi: float
    dip_detunings: tuple[float, ...]


def curve_presets() -> dict[str, CurvePreset]:
    """Las ocho curvas de ganancia: cuatro fases de lazo por configuración."""
    pi = math.pi
    presets = [
        CurvePreset("a-phi0", ConfigurationKind.A, 10.0, 0.1, 0.74, 0.0, (-9.98,)),
        CurvePreset("a-phipi", ConfigurationKind.A, 10.0, 0.1, 0.74, pi, (9.98,)),
        CurvePreset("a-phipi2", ConfigurationKind.A, 10.0, 0.1, 1.70, pi / 2, (-12.12, 12.12)),
        CurvePreset("a-phi3pi2", ConfigurationKind.A, 10.0, 0.1, 6.13, 3 * pi / 2, (0.0,)),
        CurvePreset("b-phi0", ConfigurationKind.B, 10.0, 0.1, 0.94, 0.0, (10.04,)),
        CurvePreset("b-phipi", ConfigurationKind.B, 10.0, 0.1, 0.94, pi, (-10.04,)),
        CurvePreset("b-phipi2", ConfigurationKind.B, 10.0, 0.1, 6.97, pi / 2, (0.0,)),
        CurvePreset("b-phi3pi2", ConfigurationKind.B, 10.0, 0.1, 1.52, 3 * pi / 2, (-12.92, 12.92)),
    ]
    return {p.name: p for p in presets}
