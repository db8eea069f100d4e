# app/core/spectra.py
"""
Observables de ganancia/absorción de la sonda y barridos.

Convención de signo: valor positivo = absorción, negativo = ganancia.
- Configuración A: sonda g₂ → Im(σ₂₁e^{−iΦ}); inversión σ₂₂ − σ₁₁.
- Configuración B: sonda g₃ → Im(σ₃₂);        inversión σ₃₃ − σ₂₂.

Los barridos usan una grilla uniforme y, para ubicar mínimos, interpolación
cuadrática sobre el mínimo discreto y sus dos vecinos.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from app.core.dynamics import steady_state, steady_state_residual
from app.core.errors import DegenerateSteadyStateError, NotSteadyStateError, ValidationError
from app.core.events import Event, EventType, debug, info
from app.core.model import build_config
from app.models.domain import ConfigurationKind, DecayRates, DriveSet, SigmaState
from app.models.results import (
    Extremum,
    GainDecomposition,
    GainRecord,
    GainSpectrum,
    PhaseRecord,
    PhaseScan,
)

EventSink = Callable[[Event], None]

# La descomposición sólo vale sobre el estacionario
DECOMPOSITION_RESIDUAL_TOL = 1e-8

# Cada cuántos puntos se emite el progreso agregado de un barrido
SCAN_PROGRESS_CHUNKS = 10


# -------------------------
# Observables
# -------------------------

def gain_probe(state: SigmaState, drives: DriveSet, kind: ConfigurationKind) -> float:
    """Ganancia de la sonda; < 0 indica amplificación."""
    if ConfigurationKind(kind) is ConfigurationKind.A:
        s21 = complex(state.s12).conjugate()
        return (s21 * complex(math.cos(drives.relative_phase), -math.sin(drives.relative_phase))).imag
    return -complex(state.s23).imag


def population_inversion(state: SigmaState, kind: ConfigurationKind) -> float:
    """Diferencia de población de la transición de sonda (superior − inferior)."""
    if ConfigurationKind(kind) is ConfigurationKind.A:
        return state.s22 - state.s11
    return state.s33 - state.s22


def decompose_gain(
    state: SigmaState,
    drives: DriveSet,
    decays: DecayRates,
    kind: ConfigurationKind,
) -> GainDecomposition:
    """
    Ganancia estacionaria = término de poblaciones + término de coherencias.

    A: g₂Γ₁₂(σ₁₁−σ₂₂)/A + Im[(Γ₁₂−iΔ₂)(ig₃σ₃₁ − ig₁σ₂₃)e^{−iΦ}/A],  A = Γ₁₂² + Δ₂²
    B: g₃Γ₂₃(σ₂₂−σ₃₃)/B + Im[(Γ₂₃−iΔ₃)(ig₁σ₁₂ − ig₂σ₃₁e^{−iΦ})/B],   B = Γ₂₃² + Δ₃²

    Raises:
        NotSteadyStateError: residuo de eom_rhs > DECOMPOSITION_RESIDUAL_TOL.
        ValidationError: escala nula (sin decoherencia y en resonancia).
    """
    residual = steady_state_residual(state, drives, decays)
    if residual > DECOMPOSITION_RESIDUAL_TOL:
        raise NotSteadyStateError("La descomposición requiere un estado estacionario", residual=residual)

    g1, g2, g3 = drives.amplitudes
    e_phi_c = complex(math.cos(drives.relative_phase), -math.sin(drives.relative_phase))
    s12, s13, s23 = complex(state.s12), complex(state.s13), complex(state.s23)
    s31 = s13.conjugate()

    if ConfigurationKind(kind) is ConfigurationKind.A:
        width, delta = decays.Gamma12, drives.delta2
        scale = width ** 2 + delta ** 2
        if scale == 0:
            raise ValidationError("Escala A nula: Γ12 = 0 y Δ2 = 0")
        population_term = g2 * width * (state.s11 - state.s22) / scale
        coherence_term = ((width - 1j * delta) * (1j * g3 * s31 - 1j * g1 * s23) * e_phi_c / scale).imag
    else:
        width, delta = decays.Gamma23, drives.delta3
        scale = width ** 2 + delta ** 2
        if scale == 0:
            raise ValidationError("Escala B nula: Γ23 = 0 y Δ3 = 0")
        population_term = g3 * width * (state.s22 - state.s33) / scale
        coherence_term = ((width - 1j * delta) * (1j * g1 * s12 - 1j * g2 * s31 * e_phi_c) / scale).imag

    return GainDecomposition(
        population_term=float(population_term),
        coherence_term=float(coherence_term),
        total=gain_probe(state, drives, kind),
        scale=float(scale),
    )


# -------------------------
# Barridos
# -------------------------

def _record_at(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    Phi: float,
    decays: DecayRates,
    detuning: float,
) -> GainRecord:
    drives = build_config(kind, g_coupling, g_probe, g_aux, Phi, detuning)
    try:
        state = steady_state(drives, decays)
    except DegenerateSteadyStateError as exc:
        raise exc.at_detuning(detuning) from exc
    return GainRecord(
        detuning=float(detuning),
        gain=gain_probe(state, drives, kind),
        pop_diff=population_inversion(state, kind),
        s11=state.s11,
        s22=state.s22,
        s33=state.s33,
    )


def scan_detuning(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    Phi: float,
    decays: DecayRates,
    d_min: float,
    d_max: float,
    n_points: int,
    *,
    workers: int = 1,
    emit: Optional[EventSink] = None,
) -> GainSpectrum:
    """
    Espectro estacionario sobre n_points desintonías uniformes en [d_min, d_max].

    Con workers > 1 los puntos se resuelven en un pool de threads; el orden de
    los registros es siempre el de la grilla.
    """
    kind = ConfigurationKind(kind)
    if int(n_points) < 2:
        raise ValidationError(f"n_points debe ser >= 2, recibido {n_points!r}")
    if not (math.isfinite(d_min) and math.isfinite(d_max) and d_min < d_max):
        raise ValidationError(f"Se requiere d_min < d_max, recibido ({d_min!r}, {d_max!r})")

    grid = np.linspace(d_min, d_max, int(n_points))

    def solve(d: float) -> GainRecord:
        return _record_at(kind, g_coupling, g_probe, g_aux, Phi, decays, float(d))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            records = list(pool.map(solve, grid))
    else:
        records = [solve(d) for d in grid]

    if emit:
        chunk = max(1, len(records) // SCAN_PROGRESS_CHUNKS)
        for i, rec in enumerate(records, start=1):
            emit(debug(EventType.SCAN_POINT, f"Δ={rec.detuning:+.4f} ganancia={rec.gain:+.6e}"))
            if i % chunk == 0 or i == len(records):
                emit(info(EventType.SCAN, f"Barrido {kind.value}: {i}/{len(records)} puntos"))

    return GainSpectrum(
        kind=kind,
        Phi=float(Phi),
        records=tuple(records),
        params={
            "kind": kind.value,
            "g_coupling": g_coupling,
            "g_probe": g_probe,
            "g_aux": g_aux,
            "Phi": float(Phi),
            **decays.as_dict(),
            "d_min": d_min,
            "d_max": d_max,
            "points": int(n_points),
        },
    )


def scan_phase(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    detuning: float,
    decays: DecayRates,
    n_points: int,
) -> PhaseScan:
    """Ganancia vs Φ en [0, 2π) (n_points valores, sin repetir 2π) a desintonía fija."""
    kind = ConfigurationKind(kind)
    if int(n_points) < 2:
        raise ValidationError(f"n_points debe ser >= 2, recibido {n_points!r}")
    records = []
    for phi in np.linspace(0.0, 2.0 * math.pi, int(n_points), endpoint=False):
        drives = build_config(kind, g_coupling, g_probe, g_aux, float(phi), detuning)
        state = steady_state(drives, decays)
        records.append(
            PhaseRecord(
                Phi=float(phi),
                gain=gain_probe(state, drives, kind),
                pop_diff=population_inversion(state, kind),
            )
        )
    return PhaseScan(kind=kind, detuning=float(detuning), records=tuple(records))


def gain_at(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    Phi: float,
    detuning: float,
    decays: DecayRates,
) -> float:
    """Ganancia estacionaria en un único punto (usada por los barridos en g₁)."""
    drives = build_config(kind, g_coupling, g_probe, g_aux, Phi, detuning)
    state = steady_state(drives, decays)
    return gain_probe(state, drives, kind)


# -------------------------
# Localización de mínimos
# -------------------------

def _refine(x: np.ndarray, y: np.ndarray, k: int) -> Extremum:
    xs, ys = x[k - 1:k + 2], y[k - 1:k + 2]
    a, b, c = np.polyfit(xs, ys, 2)
    if a <= 0:
        return Extremum(detuning=float(x[k]), gain=float(y[k]))
    vertex = -b / (2.0 * a)
    vertex = min(max(vertex, xs[0]), xs[-1])
    return Extremum(detuning=float(vertex), gain=float(np.polyval([a, b, c], vertex)))


def find_extremum(spectrum: GainSpectrum) -> Extremum:
    """
    Ganancia más negativa del espectro, refinada por interpolación cuadrática.
    Si el mínimo discreto cae en un borde se devuelve tal cual con at_boundary=True.
    """
    if len(spectrum) < 3:
        raise ValidationError(f"Se requieren al menos 3 puntos, recibido {len(spectrum)}")
    x = np.asarray(spectrum.detunings)
    y = np.asarray(spectrum.gains)
    k = int(np.argmin(y))
    if k == 0 or k == len(y) - 1:
        return Extremum(detuning=float(x[k]), gain=float(y[k]), at_boundary=True)
    return _refine(x, y, k)


def find_local_minima(spectrum: GainSpectrum) -> list[Extremum]:
    """Todos los mínimos locales interiores, refinados, ordenados por desintonía."""
    if len(spectrum) < 3:
        raise ValidationError(f"Se requieren al menos 3 puntos, recibido {len(spectrum)}")
    x = np.asarray(spectrum.detunings)
    y = np.asarray(spectrum.gains)
    return [
        _refine(x, y, k)
        for k in range(1, len(y) - 1)
        if y[k] < y[k - 1] and y[k] <= y[k + 1]
    ]
