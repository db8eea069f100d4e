# tests/test_spectra.py
"""
Tests de observables de ganancia, descomposición y barridos en desintonía.
"""

import math

import numpy as np
import pytest

from app.core.dynamics import steady_state
from app.core.errors import DegenerateSteadyStateError, NotSteadyStateError, ValidationError
from app.core.events import EventLevel, EventType
from app.core.model import build_config
from app.core.spectra import (
    decompose_gain,
    find_extremum,
    find_local_minima,
    gain_at,
    gain_probe,
    population_inversion,
    scan_detuning,
    scan_phase,
)
from app.models.domain import ConfigurationKind, DecayRates, SigmaState
from app.models.results import GainRecord, GainSpectrum

A = ConfigurationKind.A
B = ConfigurationKind.B
UNIT = DecayRates.uniform(1.0)


def _synthetic(detunings, gains) -> GainSpectrum:
    records = tuple(GainRecord(d, g, 0.0, 1.0, 0.0, 0.0) for d, g in zip(detunings, gains))
    return GainSpectrum(kind=A, Phi=0.0, records=records)


# -------------------------
# Observables
# -------------------------

def test_gain_sign_conventions_kind_a():
    drives = build_config(A, 10, 0.1, 0.0, math.pi / 2, 0.0)
    state = SigmaState(1.0, 0.0, s12=0.2j)

    # Im(conj(σ12) e^{−iΦ}) con Φ = π/2: Im(−0.2i · −i) = 0
    assert gain_probe(state, drives, A) == pytest.approx(0.0, abs=1e-15)
    assert population_inversion(state, A) == -1.0


def test_gain_sign_conventions_kind_b():
    drives = build_config(B, 10, 0.1, 0.0, 0.0, 0.0)
    state = SigmaState(0.2, 0.5, s23=0.1 - 0.3j)

    assert gain_probe(state, drives, B) == pytest.approx(0.3)
    assert population_inversion(state, B) == pytest.approx(0.3 - 0.5)


def test_uncoupled_signal_is_absorbed():
    """Test: sin acoplamiento ni auxiliar la sonda en resonancia se absorbe (ganancia > 0)"""
    assert gain_at(A, 0.0, 0.1, 0.0, 0.0, 0.0, UNIT) > 0
    assert gain_at(B, 0.0, 0.1, 0.0, 0.0, 0.0, UNIT) == pytest.approx(0.0, abs=1e-15)


def test_eit_suppresses_absorption_at_resonance():
    """Test: con acoplamiento fuerte la absorción cae a ≈ g2/(Γ12 + g3²/Γ13)"""
    bare = gain_at(A, 0.0, 0.1, 0.0, 0.0, 0.0, UNIT)
    coupled = gain_at(A, 10.0, 0.1, 0.0, 0.0, 0.0, UNIT)

    assert coupled == pytest.approx(0.1 / (0.5 + 100.0), rel=0.02)
    assert bare / coupled > 100


def test_weak_signal_response_approaches_linear():
    """Test: en el mínimo (Φ = 0, g1 = 0.74) la parte que depende de la sonda se vuelve lineal al debilitarla"""
    def gain(g_probe: float) -> float:
        return gain_at(A, 10.0, g_probe, 0.74, 0.0, -9.98, UNIT)

    # el lazo g1·g3 induce σ12 aun sin sonda
    loop_only = gain(0.0)
    assert abs(loop_only) > 1e-8

    def response(g_probe: float) -> float:
        return gain(g_probe) - loop_only

    weak = abs(response(0.01) / response(0.005) - 2.0)
    strong = abs(response(0.1) / response(0.05) - 2.0)

    assert weak < strong


def test_decomposition_sums_to_gain():
    rng = np.random.default_rng(13)
    for kind in (A, B):
        for _ in range(10):
            g_aux, phi, d = rng.uniform(0, 5), rng.uniform(0, 2 * math.pi), rng.uniform(-15, 15)
            drives = build_config(kind, 10, 0.1, g_aux, phi, d)
            state = steady_state(drives, UNIT)

            parts = decompose_gain(state, drives, UNIT, kind)

            assert parts.population_term + parts.coherence_term == pytest.approx(parts.total, abs=1e-10)
            assert parts.total == pytest.approx(gain_probe(state, drives, kind), abs=1e-15)


def test_decomposition_requires_steady_state():
    drives = build_config(A, 10, 0.1, 0.74, 0.0, -9.98)

    with pytest.raises(NotSteadyStateError) as info:
        decompose_gain(SigmaState.excited(2), drives, UNIT, A)

    assert info.value.residual > 1e-8


def test_decomposition_population_term_without_aux_is_absorptive():
    drives = build_config(A, 0.0, 0.1, 0.0, 0.0, 0.0)
    parts = decompose_gain(steady_state(drives, UNIT), drives, UNIT, A)

    assert parts.population_term > 0
    assert parts.scale == pytest.approx(0.25)


# -------------------------
# Barridos
# -------------------------

def test_scan_detuning_grid_and_params():
    spectrum = scan_detuning(A, 10, 0.1, 0.74, 0.0, UNIT, -20, 20, 41)

    assert len(spectrum) == 41
    assert spectrum.detunings[0] == -20 and spectrum.detunings[-1] == 20
    assert spectrum.params["points"] == 41
    assert spectrum.params["gamma2"] == 1.0
    for rec in spectrum.records:
        assert rec.s11 + rec.s22 + rec.s33 == pytest.approx(1.0)


def test_scan_detuning_with_workers_is_identical():
    serial = scan_detuning(B, 10, 0.1, 0.94, 0.0, UNIT, -15, 15, 61)
    pooled = scan_detuning(B, 10, 0.1, 0.94, 0.0, UNIT, -15, 15, 61, workers=4)

    assert serial == pooled


def test_scan_detuning_emits_progress():
    events = []

    scan_detuning(A, 10, 0.1, 0.0, 0.0, UNIT, -5, 5, 20, emit=events.append)

    points = [e for e in events if e.type is EventType.SCAN_POINT]
    progress = [e for e in events if e.type is EventType.SCAN]
    assert len(points) == 20
    assert all(e.level is EventLevel.DEBUG for e in points)
    assert len(progress) == 10


def test_scan_detuning_validates_grid():
    with pytest.raises(ValidationError):
        scan_detuning(A, 10, 0.1, 0.0, 0.0, UNIT, 5, -5, 11)
    with pytest.raises(ValidationError):
        scan_detuning(A, 10, 0.1, 0.0, 0.0, UNIT, -5, 5, 1)


def test_scan_detuning_reports_degenerate_detuning():
    with pytest.raises(DegenerateSteadyStateError) as info:
        scan_detuning(A, 0.0, 0.0, 0.0, 0.0, DecayRates(0.0, 0.0, 0.0), -1, 1, 3)

    assert info.value.detuning == -1.0


def test_mirror_symmetry_between_phases():
    """Test: ganancia(Δ; Φ) = ganancia(−Δ; π − Φ)"""
    rng = np.random.default_rng(31)
    for kind in (A, B):
        for _ in range(8):
            g_aux, phi, d = rng.uniform(0, 7), rng.uniform(0, 2 * math.pi), rng.uniform(-15, 15)
            direct = gain_at(kind, 10, 0.1, g_aux, phi, d, UNIT)
            mirrored = gain_at(kind, 10, 0.1, g_aux, math.pi - phi, -d, UNIT)
            assert direct == pytest.approx(mirrored, abs=1e-10)


def test_scan_phase_covers_one_period():
    scan = scan_phase(A, 10, 0.1, 0.74, -9.98, UNIT, 8)

    phases = [r.Phi for r in scan.records]
    assert phases[0] == 0.0
    assert phases[-1] == pytest.approx(2 * math.pi * 7 / 8)
    assert scan.records[0].gain == pytest.approx(gain_at(A, 10, 0.1, 0.74, 0.0, -9.98, UNIT))


# -------------------------
# Mínimos
# -------------------------

def test_find_extremum_refines_parabola():
    x = np.linspace(-2, 2, 21)
    spectrum = _synthetic(x, (x - 0.33) ** 2 - 1.0)

    ext = find_extremum(spectrum)

    assert ext.detuning == pytest.approx(0.33, abs=1e-9)
    assert ext.gain == pytest.approx(-1.0, abs=1e-9)
    assert not ext.at_boundary


def test_find_extremum_flags_boundary():
    x = np.linspace(0, 1, 11)

    ext = find_extremum(_synthetic(x, -x))

    assert ext.at_boundary
    assert ext.detuning == 1.0


def test_find_extremum_needs_three_points():
    with pytest.raises(ValidationError):
        find_extremum(_synthetic([0.0, 1.0], [0.0, 1.0]))


def test_find_local_minima_double_dip():
    x = np.linspace(-3, 3, 121)
    y = (x ** 2 - 4.0) ** 2 / 16.0 - 1.0

    minima = find_local_minima(_synthetic(x, y))

    assert [m.detuning for m in minima] == pytest.approx([-2.0, 2.0], abs=1e-2)
