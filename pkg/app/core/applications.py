# app/core/applications.py
"""
Aplicaciones físicas del modelo:

- Qubit de flujo superconductor: tasas SI a partir de los módulos |t_ij|
  (tasa ∝ |t|²) y tiempo en segundos hasta el estado estacionario.
- Moléculas quirales: los enantiómeros difieren sólo en la fase de lazo
  (Φᴸ − Φᴿ = π) y se distinguen por sus espectros de ganancia.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from app.core.dynamics import time_to_steady
from app.core.events import Event, EventType, info
from app.core.model import build_config
from app.core.spectra import scan_detuning
from app.models.domain import ConfigurationKind, DecayRates, FluxQubitParams, SigmaState
from app.models.results import EnantiomerReport, FluxQubitRates

EventSink = Callable[[Event], None]

# Amplitudes del problema normalizado (acoplamiento 10γ, sonda 0.1γ)
FLUX_G_COUPLING = 10.0
FLUX_G_PROBE = 0.1
SI_STEADY_EPS = 1e-3

ENANTIOMER_OFFSET = math.pi


# -------------------------
# Qubit de flujo
# -------------------------

def flux_qubit_rates(params: FluxQubitParams) -> FluxQubitRates:
    """
    γ_canal = gamma_ref · (|t_canal| / t_ref)², según params.channel_map.
    γ_unit es la tasa 2→1 (gamma2), que fija la escala de tiempo adimensional.
    """
    mapping = dict(params.channel_map)
    rates = {
        channel: params.gamma_ref * (params.modulus(element) / params.t_ref) ** 2
        for channel, element in mapping.items()
    }
    si = DecayRates(**rates)
    gamma_unit = si.gamma2
    return FluxQubitRates(si=si, normalized=si.scaled(1.0 / gamma_unit), gamma_unit=gamma_unit)


def si_steady_time(
    params: FluxQubitParams,
    kind: ConfigurationKind = ConfigurationKind.A,
    g_coupling_over_gamma: float = FLUX_G_COUPLING,
    g_probe_over_gamma: float = FLUX_G_PROBE,
    g_aux_over_gamma: float = 0.74,
    Phi: float = 0.0,
    detuning_over_gamma: float = -9.98,
    *,
    initial: Optional[SigmaState] = None,
    eps: float = SI_STEADY_EPS,
    emit: Optional[EventSink] = None,
) -> float:
    """
    Segundos hasta el estacionario (desde el fundamental) para el problema
    normalizado por γ_unit.

    Raises:
        SteadyStateTimeoutError: propagado desde time_to_steady.
    """
    rates = flux_qubit_rates(params)
    drives = build_config(
        kind,
        g_coupling_over_gamma,
        g_probe_over_gamma,
        g_aux_over_gamma,
        Phi,
        detuning_over_gamma,
    )
    t_norm = time_to_steady(drives, rates.normalized, initial, eps, emit=emit)
    seconds = rates.to_seconds(t_norm)
    if emit:
        emit(info(
            EventType.TIMESCALE,
            f"t_ss = {t_norm:.4g}/γ = {seconds:.3e} s (γ_unit = {rates.gamma_unit:.3e} s⁻¹)",
            payload={"t_over_gamma": t_norm, "seconds": seconds},
        ))
    return seconds


# -------------------------
# Discriminación quiral
# -------------------------

def enantiomer_spectra(
    kind: ConfigurationKind,
    g_coupling: float,
    g_probe: float,
    g_aux: float,
    Phi_left: float,
    decays: DecayRates,
    d_min: float,
    d_max: float,
    n_points: int,
    *,
    offset: float = ENANTIOMER_OFFSET,
    workers: int = 1,
    emit: Optional[EventSink] = None,
) -> EnantiomerReport:
    """
    Espectro izquierdo con Φ_left y derecho con Φ_left − offset, mismas amplitudes.
    discrimination = max |ganancia_L − ganancia_R| sobre la grilla.
    """
    left = scan_detuning(
        kind, g_coupling, g_probe, g_aux, Phi_left, decays, d_min, d_max, n_points,
        workers=workers,
    )
    right = scan_detuning(
        kind, g_coupling, g_probe, g_aux, Phi_left - offset, decays, d_min, d_max, n_points,
        workers=workers,
    )

    gap = np.abs(np.asarray(left.gains) - np.asarray(right.gains))
    k = int(np.argmax(gap))
    report = EnantiomerReport(
        left=left,
        right=right,
        discrimination=float(gap[k]),
        discrimination_at=float(left.detunings[k]),
    )
    if emit:
        emit(info(
            EventType.CHIRAL,
            f"Discriminación {report.discrimination:.4e} en Δ = {report.discrimination_at:+.4f}",
            payload={"discrimination": report.discrimination, "at": report.discrimination_at},
        ))
    return report
