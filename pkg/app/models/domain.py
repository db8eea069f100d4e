# app/models/domain.py
"""
Modelos de dominio (dataclasses) del sistema de tres niveles con transición cíclica.

Reglas:
- Acá NO hay lógica numérica pesada (eso vive en app/core).
- Son valores inmutables: se validan al construirse y después no cambian.
- Todas las tasas, amplitudes y desintonías están en unidades de una γ de referencia;
  la conversión a SI sólo ocurre en app/core/applications.py.

Convención de niveles: 1 (fundamental) < 2 < 3. Canales de decaimiento:
γ₁: 3→1, γ₃: 3→2, γ₂: 2→1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.core.errors import ValidationError

# Tolerancia absoluta para la condición de lazo cerrado Δ₁ = Δ₂ + Δ₃
DETUNING_LOOP_TOL = 1e-12

TWO_PI = 2.0 * math.pi


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValidationError(f"'{name}' debe ser finito, recibido {value!r}")


def _require_nonnegative(**values: float) -> None:
    _require_finite(**values)
    for name, value in values.items():
        if value < 0:
            raise ValidationError(f"'{name}' no puede ser negativo, recibido {value!r}")


def normalize_phase(phi: float) -> float:
    """Reduce una fase a [0, 2π)."""
    reduced = math.fmod(phi, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    # fmod puede devolver exactamente 2π tras sumar a un negativo diminuto
    return 0.0 if reduced >= TWO_PI else reduced


# -------------------------
# Configuraciones de sonda
# -------------------------

class ConfigurationKind(str, Enum):
    """
    A: acoplamiento fuerte resonante en 2↔3, sonda en 1↔2, auxiliar en 1↔3.
    B: acoplamiento fuerte resonante en 1↔2, sonda en 2↔3, auxiliar en 1↔3.
    """
    A = "A"
    B = "B"

    @classmethod
    def parse(cls, text: str) -> "ConfigurationKind":
        key = str(text or "").strip().upper()
        try:
            return cls(key)
        except ValueError:
            raise ValidationError(f"Configuración desconocida: {text!r} (válidas: a, b)") from None


# -------------------------
# Tasas y campos
# -------------------------

@dataclass(frozen=True)
class DecayRates:
    """
    Tasas de decaimiento de los niveles.
    gamma1: 3→1, gamma2: 2→1, gamma3: 3→2.
    """
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0

    def __post_init__(self) -> None:
        _require_nonnegative(gamma1=self.gamma1, gamma2=self.gamma2, gamma3=self.gamma3)

    @classmethod
    def uniform(cls, gamma: float = 1.0) -> "DecayRates":
        return cls(gamma, gamma, gamma)

    @property
    def Gamma12(self) -> float:
        return self.gamma2 / 2.0

    @property
    def Gamma13(self) -> float:
        return (self.gamma1 + self.gamma3) / 2.0

    @property
    def Gamma23(self) -> float:
        return (self.gamma1 + self.gamma2 + self.gamma3) / 2.0

    def scaled(self, factor: float) -> "DecayRates":
        return DecayRates(self.gamma1 * factor, self.gamma2 * factor, self.gamma3 * factor)

    def as_dict(self) -> dict[str, float]:
        return {"gamma1": self.gamma1, "gamma2": self.gamma2, "gamma3": self.gamma3}


@dataclass(frozen=True)
class DriveSet:
    """
    Los tres campos coherentes: G₃₁/2 = g1·e^{iφ1}, G₂₁/2 = g2·e^{iφ2}, G₃₂/2 = g3·e^{iφ3}.

    - g*: semi-amplitudes de Rabi (la amplitud es 2g), no negativas.
    - phi*: fases en radianes.
    - delta*: desintonías; se exige Δ₁ = Δ₂ + Δ₃ (interacción independiente del tiempo).
    """
    g1: float
    g2: float
    g3: float
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0

    def __post_init__(self) -> None:
        _require_nonnegative(g1=self.g1, g2=self.g2, g3=self.g3)
        _require_finite(
            phi1=self.phi1, phi2=self.phi2, phi3=self.phi3,
            delta1=self.delta1, delta2=self.delta2, delta3=self.delta3,
        )
        mismatch = self.delta1 - (self.delta2 + self.delta3)
        if abs(mismatch) > DETUNING_LOOP_TOL:
            raise ValidationError(
                f"Se requiere Δ1 = Δ2 + Δ3: Δ1={self.delta1!r}, Δ2={self.delta2!r}, "
                f"Δ3={self.delta3!r} (diferencia {mismatch:.3g})"
            )

    @property
    def relative_phase(self) -> float:
        """Fase de lazo Φ = φ₂ + φ₃ − φ₁ reducida a [0, 2π)."""
        return normalize_phase(self.phi2 + self.phi3 - self.phi1)

    @property
    def amplitudes(self) -> tuple[float, float, float]:
        return (self.g1, self.g2, self.g3)

    @property
    def detunings(self) -> tuple[float, float, float]:
        return (self.delta1, self.delta2, self.delta3)


@dataclass(frozen=True)
class LabFrameSpec:
    """Energías de los niveles y frecuencias de los campos (marco de laboratorio)."""
    e1: float
    e2: float
    e3: float
    w31: float
    w21: float
    w32: float

    def __post_init__(self) -> None:
        _require_finite(e1=self.e1, e2=self.e2, e3=self.e3, w31=self.w31, w21=self.w21, w32=self.w32)
        if not (self.e3 > self.e2 > self.e1):
            raise ValidationError(
                f"Los niveles deben cumplir E3 > E2 > E1, recibido ({self.e1}, {self.e2}, {self.e3})"
            )


# -------------------------
# Estado (matriz densidad rotada)
# -------------------------

@dataclass(frozen=True)
class SigmaState:
    """
    Matriz densidad en el marco rotado σ.

    Se guardan sólo σ₁₁, σ₂₂ y las coherencias σ₁₂, σ₁₃, σ₂₃;
    σ₃₃ = 1 − σ₁₁ − σ₂₂ y σⱼᵢ = conj(σᵢⱼ) se derivan.
    """
    s11: float
    s22: float
    s12: complex = 0j
    s13: complex = 0j
    s23: complex = 0j

    @classmethod
    def ground(cls) -> "SigmaState":
        return cls(1.0, 0.0)

    @classmethod
    def excited(cls, level: int) -> "SigmaState":
        """Estado puro |level⟩ (1, 2 o 3)."""
        if level == 1:
            return cls(1.0, 0.0)
        if level == 2:
            return cls(0.0, 1.0)
        if level == 3:
            return cls(0.0, 0.0)
        raise ValidationError(f"Nivel inexistente: {level!r} (válidos: 1, 2, 3)")

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "SigmaState":
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValidationError(f"Se esperaba una matriz 3x3, recibido {m.shape}")
        return cls(
            s11=float(m[0, 0].real),
            s22=float(m[1, 1].real),
            s12=complex(m[0, 1]),
            s13=complex(m[0, 2]),
            s23=complex(m[1, 2]),
        )

    @property
    def s33(self) -> float:
        return 1.0 - self.s11 - self.s22

    @property
    def populations(self) -> tuple[float, float, float]:
        return (self.s11, self.s22, self.s33)

    def matrix(self) -> np.ndarray:
        """Matriz 3x3 hermítica (conjugado-simétrica por construcción)."""
        s12, s13, s23 = complex(self.s12), complex(self.s13), complex(self.s23)
        return np.array(
            [
                [self.s11, s12, s13],
                [s12.conjugate(), self.s22, s23],
                [s13.conjugate(), s23.conjugate(), self.s33],
            ],
            dtype=complex,
        )

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix())[0])


# -------------------------
# Qubit de flujo (unidades SI)
# -------------------------

# Qué módulo |t_ij| alimenta cada canal, con etiquetas 0,1,2 → niveles 1,2,3
DEFAULT_CHANNEL_MAP: dict[str, str] = {
    "gamma1": "t02",  # 3→1
    "gamma2": "t01",  # 2→1
    "gamma3": "t12",  # 3→2
}


@dataclass(frozen=True)
class FluxQubitParams:
    """
    Módulos de los elementos de matriz de transición y tasa de referencia.

    gamma_ref [s⁻¹] corresponde a un elemento de matriz de módulo t_ref;
    las tasas escalan como |t|².
    """
    t01: float = 0.19
    t02: float = 0.14
    t12: float = 0.19
    gamma_ref: float = 6.9e7
    t_ref: float = 0.66
    channel_map: tuple[tuple[str, str], ...] = tuple(DEFAULT_CHANNEL_MAP.items())

    def __post_init__(self) -> None:
        _require_nonnegative(t01=self.t01, t02=self.t02, t12=self.t12, t_ref=self.t_ref)
        _require_finite(gamma_ref=self.gamma_ref)
        for name in ("t01", "t02", "t12"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"'{name}' debe ser > 0")
        if self.t_ref == 0:
            raise ValidationError("'t_ref' no puede ser 0")
        if self.gamma_ref <= 0:
            raise ValidationError("'gamma_ref' debe ser > 0")
        mapping = dict(self.channel_map)
        if set(mapping) != {"gamma1", "gamma2", "gamma3"}:
            raise ValidationError(f"channel_map debe asignar gamma1, gamma2 y gamma3: {mapping}")
        for channel, element in mapping.items():
            if element not in ("t01", "t02", "t12"):
                raise ValidationError(f"channel_map[{channel}] = {element!r} no es t01/t02/t12")

    def modulus(self, element: str) -> float:
        return float(getattr(self, element))

    def scaled(self, factor: float) -> "FluxQubitParams":
        """Misma geometría con gamma_ref multiplicada por factor."""
        return FluxQubitParams(
            t01=self.t01,
            t02=self.t02,
            t12=self.t12,
            gamma_ref=self.gamma_ref * factor,
            t_ref=self.t_ref,
            channel_map=self.channel_map,
        )
