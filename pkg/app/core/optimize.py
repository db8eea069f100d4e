# app/core/optimize.py
"""
Búsqueda 1-D de la amplitud del campo auxiliar g₁ que maximiza la ganancia
(la ganancia más negativa) a fase y desintonía fijas.

Estrategia:
- Grilla gruesa (densidad por defecto: 240 puntos cada 12γ) para acotar el mínimo.
- Sección áurea sobre el intervalo de los dos vecinos del mínimo discreto.
- Grilla global sobre [0, AUX_GLOBAL_MAX] para avisar si el óptimo local no es el global.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from app.core.errors import BracketingError, ValidationError
from app.core.events import Event, EventType, debug, info, warn
from app.core.spectra import gain_at
from app.models.domain import ConfigurationKind, DecayRates
from app.models.results import AuxRecord, AuxScanCurve, OptimalAux

EventSink = Callable[[Event], None]

AUX_GLOBAL_MAX = 12.0
AUX_GRID_POINTS = 240
AUX_TOL = 1e-3

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2


# -------------------------
# Sección áurea
# -------------------------

def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = AUX_TOL) -> tuple[float, float]:
    """
    Mínimo de f unimodal en [a, b] con precisión absoluta tol en x.

    Returns:
        (x, f(x)) del mejor punto evaluado.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(steps - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)

    return (c, yc) if yc < yd else (d, yd)


# -------------------------
# Barrido y óptimo en g₁
# -------------------------

def _gains_on(
    grid: np.ndarray,
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    Phi: float,
    detuning: float,
    decays: DecayRates,
    workers: int,
) -> list[float]:
    def solve(g: float) -> float:
        return gain_at(kind, g_coupling, g_probe, float(g), Phi, detuning, decays)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            return list(pool.map(solve, grid))
    return [solve(g) for g in grid]


def scan_aux_amplitude(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    Phi: float,
    detuning: float,
    decays: DecayRates,
    g_max: float,
    n_points: int,
    *,
    workers: int = 1,
    emit: Optional[EventSink] = None,
) -> AuxScanCurve:
    """Ganancia estacionaria sobre una grilla uniforme de g₁ en [0, g_max]."""
    kind = ConfigurationKind(kind)
    if not (math.isfinite(g_max) and g_max > 0):
        raise ValidationError(f"g_max debe ser > 0, recibido {g_max!r}")
    if int(n_points) < 2:
        raise ValidationError(f"n_points debe ser >= 2, recibido {n_points!r}")

    grid = np.linspace(0.0, g_max, int(n_points))
    gains = _gains_on(grid, kind, g_coupling, g_probe, Phi, detuning, decays, workers)

    if emit:
        emit(info(EventType.SCAN, f"Barrido en g1 ({kind.value}): {len(grid)} puntos en [0, {g_max:g}]"))

    return AuxScanCurve(
        kind=kind,
        Phi=float(Phi),
        detuning=float(detuning),
        records=tuple(AuxRecord(g_aux=float(g), gain=float(y)) for g, y in zip(grid, gains)),
    )


def optimal_aux_amplitude(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    Phi: float,
    detuning: float,
    decays: DecayRates,
    bracket: tuple[float, float] = (0.0, AUX_GLOBAL_MAX),
    *,
    grid_points: int = AUX_GRID_POINTS,
    tol: float = AUX_TOL,
    workers: int = 1,
    emit: Optional[EventSink] = None,
) -> OptimalAux:
    """
    Óptimo local de g₁ dentro de bracket.

    Raises:
        ValidationError: bracket inválido.
        BracketingError: el mínimo de la grilla gruesa cae en un extremo del bracket.
    """
    kind = ConfigurationKind(kind)
    lo, hi = (float(v) for v in bracket)
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 <= lo < hi):
        raise ValidationError(f"Bracket inválido: ({lo!r}, {hi!r}); se requiere 0 <= lo < hi")

    density = grid_points / AUX_GLOBAL_MAX
    n_local = max(5, int(math.ceil(density * (hi - lo))) + 1)
    grid = np.linspace(lo, hi, n_local)
    gains = _gains_on(grid, kind, g_coupling, g_probe, Phi, detuning, decays, workers)

    k = int(np.argmin(gains))
    if k == 0 or k == len(grid) - 1:
        raise BracketingError(
            f"Sin mínimo interior de la ganancia en g1 ∈ [{lo:g}, {hi:g}] "
            f"(mínimo de grilla en g1={grid[k]:g})"
        )
    if emit:
        emit(debug(EventType.OPTIMUM, f"Mínimo de grilla: g1={grid[k]:.4f} ganancia={gains[k]:+.6e}"))

    def objective(g: float) -> float:
        return gain_at(kind, g_coupling, g_probe, g, Phi, detuning, decays)

    g_star, gain_star = golden_section(objective, float(grid[k - 1]), float(grid[k + 1]), tol)
    if gain_star > gains[k]:
        g_star, gain_star = float(grid[k]), float(gains[k])

    # Grilla global con la misma densidad
    global_grid = np.linspace(0.0, max(AUX_GLOBAL_MAX, hi), int(grid_points) + 1)
    global_gains = _gains_on(global_grid, kind, g_coupling, g_probe, Phi, detuning, decays, workers)
    j = int(np.argmin(global_gains))
    spacing = float(global_grid[1] - global_grid[0])
    is_global = abs(float(global_grid[j]) - g_star) <= spacing or gain_star <= global_gains[j]

    result = OptimalAux(
        g_star=float(g_star),
        gain_star=float(gain_star),
        bracket=(lo, hi),
        global_g=float(global_grid[j]),
        global_gain=float(global_gains[j]),
        is_global=bool(is_global),
    )

    if emit:
        emit(info(EventType.OPTIMUM, f"g1* = {result.g_star:.4f} (ganancia {result.gain_star:+.6e})", payload=result))
        if not result.is_global:
            emit(warn(
                EventType.OPTIMUM,
                f"El mínimo global de la grilla está en g1={result.global_g:.4f} "
                f"(ganancia {result.global_gain:+.6e})",
            ))

    return result
