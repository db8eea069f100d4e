# app/models/results.py
"""
Resultados de los cálculos (espectros, barridos, optimización, aplicaciones).

Igual que domain.py: sólo datos + validación de invariantes en __post_init__.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from app.core.errors import ValidationError
from app.models.domain import ConfigurationKind, DecayRates

POPULATION_SUM_TOL = 1e-9


# -------------------------
# Espectros de ganancia
# -------------------------

@dataclass(frozen=True)
class GainRecord:
    """Un punto del espectro: ganancia < 0 indica amplificación de la sonda."""
    detuning: float
    gain: float
    pop_diff: float
    s11: float
    s22: float
    s33: float


@dataclass(frozen=True)
class GainSpectrum:
    """
    Espectro de ganancia vs desintonía de la sonda (Δ₂ en A, Δ₃ en B).
    Guarda las poblaciones completas para armar ganancia y diferencia de población
    con una sola corrida.
    """
    kind: ConfigurationKind
    Phi: float
    records: tuple[GainRecord, ...] = ()
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for prev, cur in zip(self.records, self.records[1:]):
            if not cur.detuning > prev.detuning:
                raise ValidationError(
                    f"Desintonías no estrictamente crecientes: {prev.detuning} → {cur.detuning}"
                )
        for rec in self.records:
            total = rec.s11 + rec.s22 + rec.s33
            if abs(total - 1.0) > POPULATION_SUM_TOL:
                raise ValidationError(
                    f"Poblaciones no suman 1 en Δ={rec.detuning}: suma={total!r}"
                )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def detunings(self) -> list[float]:
        return [r.detuning for r in self.records]

    @property
    def gains(self) -> list[float]:
        return [r.gain for r in self.records]

    @property
    def pop_diffs(self) -> list[float]:
        return [r.pop_diff for r in self.records]


@dataclass(frozen=True)
class GainDecomposition:
    """
    Separación de la ganancia en estado estacionario:
    total = population_term + coherence_term, con scale = A (config. A) o B (config. B).
    """
    population_term: float
    coherence_term: float
    total: float
    scale: float

    def __post_init__(self) -> None:
        gap = abs(self.population_term + self.coherence_term - self.total)
        if gap > 1e-8 * max(1.0, abs(self.total)):
            raise ValidationError(f"Descomposición inconsistente: diferencia {gap:.3g}")


@dataclass(frozen=True)
class Extremum:
    """Mínimo de ganancia refinado; at_boundary marca que cayó en un borde del barrido."""
    detuning: float
    gain: float
    at_boundary: bool = False


@dataclass(frozen=True)
class PhaseRecord:
    Phi: float
    gain: float
    pop_diff: float


@dataclass(frozen=True)
class PhaseScan:
    """Ganancia vs fase de lazo Φ a desintonía fija."""
    kind: ConfigurationKind
    detuning: float
    records: tuple[PhaseRecord, ...] = ()


# -------------------------
# Optimización del campo auxiliar
# -------------------------

@dataclass(frozen=True)
class AuxRecord:
    g_aux: float
    gain: float


@dataclass(frozen=True)
class AuxScanCurve:
    """Ganancia vs amplitud del campo auxiliar g₁ a fase y desintonía fijas."""
    kind: ConfigurationKind
    Phi: float
    detuning: float
    records: tuple[AuxRecord, ...] = ()

    def __post_init__(self) -> None:
        for prev, cur in zip(self.records, self.records[1:]):
            if not cur.g_aux > prev.g_aux:
                raise ValidationError(f"g_aux no estrictamente creciente: {prev.g_aux} → {cur.g_aux}")
        if self.records and self.records[0].g_aux < 0:
            raise ValidationError("g_aux no puede ser negativo")

    def minimum(self) -> AuxRecord:
        return min(self.records, key=lambda r: r.gain)


@dataclass(frozen=True)
class OptimalAux:
    """
    Óptimo local de g₁ dentro del intervalo pedido.
    global_*: mínimo de la grilla gruesa global; is_global indica si coinciden.
    """
    g_star: float
    gain_star: float
    bracket: tuple[float, float]
    global_g: float
    global_gain: float
    is_global: bool


# -------------------------
# Aplicaciones
# -------------------------

@dataclass(frozen=True)
class FluxQubitRates:
    """Tasas en s⁻¹, tasas normalizadas y la γ de normalización (s⁻¹)."""
    si: DecayRates
    normalized: DecayRates
    gamma_unit: float

    def to_seconds(self, t_over_gamma: float) -> float:
        return t_over_gamma / self.gamma_unit


@dataclass(frozen=True)
class EnantiomerReport:
    """Espectros izquierdo/derecho y su máxima diferencia."""
    left: GainSpectrum
    right: GainSpectrum
    discrimination: float
    discrimination_at: Optional[float] = None

    def __post_init__(self) -> None:
        if self.left.detunings != self.right.detunings:
            raise ValidationError("Los espectros izquierdo y derecho deben compartir la grilla")
        if not (self.discrimination >= 0 and math.isfinite(self.discrimination)):
            raise ValidationError(f"Discriminación inválida: {self.discrimination!r}")
