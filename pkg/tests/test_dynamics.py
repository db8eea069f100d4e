# tests/test_dynamics.py
"""
Tests de las ecuaciones de movimiento, el integrador y el estado estacionario.
"""

import math

import numpy as np
import pytest

from app.core.dynamics import (
    STATE_SIZE,
    build_generator,
    eom_rhs,
    evolve,
    pack_state,
    propagate,
    state_distance,
    steady_state,
    steady_state_residual,
    time_to_steady,
    unpack_state,
)
from app.core.errors import (
    DegenerateSteadyStateError,
    SteadyStateTimeoutError,
    ValidationError,
)
from app.core.model import build_config
from app.models.domain import ConfigurationKind, DecayRates, DriveSet, SigmaState


def _random_drives(rng, g_max: float = 3.0) -> DriveSet:
    g1, g2, g3 = rng.uniform(0.0, g_max, size=3)
    d2, d3 = rng.uniform(-5.0, 5.0, size=2)
    p1, p2, p3 = rng.uniform(-math.pi, math.pi, size=3)
    return DriveSet(g1, g2, g3, phi1=p1, phi2=p2, phi3=p3, delta1=d2 + d3, delta2=d2, delta3=d3)


def _random_decays(rng) -> DecayRates:
    return DecayRates(*rng.uniform(0.2, 2.0, size=3))


def _random_state(rng) -> SigmaState:
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = m @ m.conj().T
    return SigmaState.from_matrix(rho / np.trace(rho).real)


# -------------------------
# Ecuaciones de movimiento
# -------------------------

def test_generator_reproduces_equations_of_motion():
    """Test: A·x + c coincide con eom_rhs para estados y campos arbitrarios"""
    rng = np.random.default_rng(11)
    for _ in range(50):
        drives, decays, state = _random_drives(rng, 10.0), _random_decays(rng), _random_state(rng)

        gen = build_generator(drives, decays)
        expected = eom_rhs(state, drives, decays).as_vector()

        assert np.allclose(gen.apply(pack_state(state)), expected, atol=1e-12)


def test_equations_of_motion_are_affine():
    """Test: eom_rhs(αx + (1−α)y) = α·eom_rhs(x) + (1−α)·eom_rhs(y)"""
    rng = np.random.default_rng(13)
    for _ in range(20):
        drives, decays = _random_drives(rng, 10.0), _random_decays(rng)
        x, y = pack_state(_random_state(rng)), pack_state(_random_state(rng))
        alpha = float(rng.uniform(0.0, 1.0))

        mixed = eom_rhs(unpack_state(alpha * x + (1 - alpha) * y), drives, decays).as_vector()
        split = (
            alpha * eom_rhs(unpack_state(x), drives, decays).as_vector()
            + (1 - alpha) * eom_rhs(unpack_state(y), drives, decays).as_vector()
        )

        assert np.allclose(mixed, split, rtol=0.0, atol=1e-12)


def test_generator_depends_only_on_loop_phase():
    """Test: (φ1 + a + b, φ2 + a, φ3 + b) no cambia Φ ni el generador"""
    rng = np.random.default_rng(19)
    decays = _random_decays(rng)
    for _ in range(20):
        base = _random_drives(rng, 10.0)
        a, b = rng.uniform(-5.0, 5.0, size=2)
        shifted = DriveSet(
            *base.amplitudes,
            phi1=base.phi1 + a + b, phi2=base.phi2 + a, phi3=base.phi3 + b,
            delta1=base.delta1, delta2=base.delta2, delta3=base.delta3,
        )

        ref, gen = build_generator(base, decays), build_generator(shifted, decays)

        assert np.allclose(gen.A, ref.A, rtol=0.0, atol=1e-12)
        assert np.array_equal(gen.c, ref.c)


def test_generator_is_periodic_in_loop_phase():
    decays = DecayRates.uniform(1.0)
    for phi in (0.0, 0.7, math.pi / 2, 4.0):
        ref = build_generator(build_config(ConfigurationKind.B, 10.0, 0.1, 1.52, phi, 3.0), decays)
        gen = build_generator(build_config(ConfigurationKind.B, 10.0, 0.1, 1.52, phi + 2 * math.pi, 3.0), decays)

        assert np.allclose(gen.A, ref.A, rtol=0.0, atol=1e-12)


def test_pure_decay_of_upper_level():
    """Test: sin campos, σ₃₃ decae con γ₁ + γ₃"""
    drives = DriveSet(0.0, 0.0, 0.0)
    decays = DecayRates.uniform(1.0)

    traj = evolve(SigmaState.excited(3), drives, decays, 2.0, t_eval=[0.5, 1.0, 2.0])

    for t, state in traj:
        assert state.s33 == pytest.approx(math.exp(-2.0 * t), abs=1e-7)


def test_state_distance_counts_upper_population():
    a = pack_state(SigmaState(0.5, 0.5))
    b = pack_state(SigmaState(0.4, 0.4))

    assert state_distance(a, b) == pytest.approx(0.2)


def test_unpack_rejects_wrong_size():
    with pytest.raises(ValidationError):
        unpack_state(np.zeros(STATE_SIZE - 1))


# -------------------------
# Estado estacionario
# -------------------------

def test_steady_state_is_a_fixed_point():
    rng = np.random.default_rng(5)
    for _ in range(30):
        drives, decays = _random_drives(rng, 10.0), _random_decays(rng)

        state = steady_state(drives, decays)

        assert steady_state_residual(state, drives, decays) < 1e-10
        assert sum(state.populations) == pytest.approx(1.0)
        assert state.min_eigenvalue() > -1e-9


def test_steady_state_without_fields_is_ground():
    state = steady_state(DriveSet(0.0, 0.0, 0.0), DecayRates.uniform(1.0))

    assert state.s11 == pytest.approx(1.0)
    assert abs(state.s12) == pytest.approx(0.0, abs=1e-14)


def test_steady_state_degenerate_without_decay():
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(DriveSet(0.0, 0.0, 0.0), DecayRates(0.0, 0.0, 0.0))


# -------------------------
# Evolución temporal
# -------------------------

def test_evolve_matches_exact_propagator():
    """Test: RK4 adaptativo vs e^{At} en t = 1, 5, 20"""
    rng = np.random.default_rng(17)
    times = [1.0, 5.0, 20.0]
    for _ in range(12):
        drives, decays = _random_drives(rng), _random_decays(rng)
        initial = _random_state(rng)

        traj = evolve(initial, drives, decays, times[-1], rel_tol=1e-9, t_eval=times)
        exact = propagate(initial, drives, decays, times)

        recorded = dict(traj)
        for t, ref in zip(times, exact):
            assert state_distance(pack_state(recorded[t]), pack_state(ref)) < 1e-6


def test_evolve_relaxes_to_steady_state():
    """Test: desde el fundamental, con g1 = 0.74 y Φ = 0 en Δ2 = −9.98, σ(50/γ) coincide con el estacionario"""
    drives = build_config(ConfigurationKind.A, 10.0, 0.1, 0.74, 0.0, -9.98)
    decays = DecayRates.uniform(1.0)

    traj = evolve(SigmaState.ground(), drives, decays, 50.0, rel_tol=1e-9)

    for _, state in traj:
        assert state.min_eigenvalue() >= -1e-8
    assert state_distance(pack_state(traj.final), pack_state(steady_state(drives, decays))) < 1e-6


def test_evolve_keeps_density_matrix_physical():
    rng = np.random.default_rng(29)
    drives, decays = _random_drives(rng, 10.0), _random_decays(rng)

    traj = evolve(SigmaState.ground(), drives, decays, 10.0)

    assert traj.accepted_steps > 0
    for _, state in traj:
        assert sum(state.populations) == pytest.approx(1.0, abs=1e-9)
        assert state.min_eigenvalue() > -1e-7


def test_evolve_lands_on_requested_times():
    traj = evolve(SigmaState.ground(), DriveSet(1, 1, 1), DecayRates.uniform(1.0), 3.0, t_eval=[0.25, 1.0, 7.0])

    assert traj.times == (0.0, 0.25, 1.0, 3.0)
    assert len(traj) == 4


def test_evolve_validates_arguments():
    drives, decays = DriveSet(1, 1, 1), DecayRates.uniform(1.0)
    with pytest.raises(ValidationError):
        evolve(SigmaState.ground(), drives, decays, 0.0)
    with pytest.raises(ValidationError):
        evolve(SigmaState.ground(), drives, decays, 1.0, rel_tol=1e-2)


# -------------------------
# Tiempo al estacionario
# -------------------------

def test_time_to_steady_pure_decay():
    """Test: σ₂₂(0) = 1 sin campos → |σ − σ_ss| = e^{−t}, cruza eps = e^{−5} en t ≈ 5"""
    t = time_to_steady(
        DriveSet(0.0, 0.0, 0.0),
        DecayRates.uniform(1.0),
        SigmaState.excited(2),
        eps=math.exp(-5.0),
    )

    assert t == pytest.approx(5.0, rel=0.1)


def test_time_to_steady_needs_full_tail_before_t_max():
    """Test: un cruce a t ≈ 5 no se acepta si la década siguiente excede t_max"""
    args = (DriveSet(0.0, 0.0, 0.0), DecayRates.uniform(1.0), SigmaState.excited(2))

    with pytest.raises(SteadyStateTimeoutError):
        time_to_steady(*args, eps=math.exp(-5.0), t_max=8.0)

    assert time_to_steady(*args, eps=math.exp(-5.0), t_max=60.0) == pytest.approx(5.0, rel=0.1)


def test_time_to_steady_zero_when_already_steady():
    drives, decays = DriveSet(1, 2, 3, delta1=1.0, delta2=0.5, delta3=0.5), DecayRates.uniform(1.0)
    events = []

    t = time_to_steady(drives, decays, steady_state(drives, decays), emit=events.append)

    assert t == 0.0
    assert events and events[0].payload == {"t": 0.0}


def test_time_to_steady_timeout():
    with pytest.raises(SteadyStateTimeoutError) as info:
        time_to_steady(DriveSet(1, 1, 1), DecayRates.uniform(1.0), t_max=1e-2)

    assert info.value.t_max == 1e-2


def test_time_to_steady_validates_eps():
    with pytest.raises(ValidationError):
        time_to_steady(DriveSet(1, 1, 1), DecayRates.uniform(1.0), eps=0.5)
