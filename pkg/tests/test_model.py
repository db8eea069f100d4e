# tests/test_model.py
"""
Tests de armado de configuraciones, desintonías de laboratorio y σ → ρ.
"""

import math

import numpy as np
import pytest

from app.core.errors import ValidationError
from app.core.model import (
    build_config,
    detunings_from_lab,
    drives_from_lab,
    curve_presets,
    probe_detuning,
    rho_from_sigma,
)
from app.models.domain import ConfigurationKind, DriveSet, LabFrameSpec, SigmaState


def _random_state(rng) -> SigmaState:
    """Estado válido: ρ = M M† / tr(M M†)."""
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = m @ m.conj().T
    return SigmaState.from_matrix(rho / np.trace(rho).real)


def test_build_config_kind_a():
    drives = build_config(ConfigurationKind.A, 10, 0.1, 0.74, 0.0, -9.98)

    assert (drives.g1, drives.g2, drives.g3) == (0.74, 0.1, 10)
    assert drives.delta1 == drives.delta2 == -9.98
    assert drives.delta3 == 0.0
    assert drives.relative_phase == 0.0


def test_build_config_kind_b():
    drives = build_config(ConfigurationKind.B, 10, 0.1, 0.94, 0.0, 10.04)

    assert (drives.g1, drives.g2, drives.g3) == (0.94, 10, 0.1)
    assert drives.delta2 == 0.0
    assert drives.delta3 == drives.delta1 == 10.04
    assert probe_detuning(drives, ConfigurationKind.B) == 10.04


def test_build_config_without_aux_is_ladder():
    drives = build_config(ConfigurationKind.A, 10, 0.1, 0.0, 0.0, 0.0)

    assert drives.g1 == 0.0


def test_build_config_loop_phase_on_aux_field():
    """Test: φ2 = φ3 = 0 y φ1 = −Φ"""
    for phi in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2):
        drives = build_config(ConfigurationKind.A, 10, 0.1, 1.0, phi, 3.0)
        assert drives.phi2 == drives.phi3 == 0.0
        assert drives.relative_phase == pytest.approx(phi)
        assert drives.delta1 - (drives.delta2 + drives.delta3) == 0.0


def test_build_config_rejects_negative_amplitude():
    with pytest.raises(ValidationError):
        build_config(ConfigurationKind.A, 10, -0.1, 0.74, 0.0, 0.0)


def test_detunings_from_lab():
    assert detunings_from_lab(LabFrameSpec(0, 5, 12, 12, 5, 7)) == (0, 0, 0)
    assert detunings_from_lab(LabFrameSpec(0, 5, 12, 11, 5, 7)) == (1, 0, 0)

    d1, d2, d3 = detunings_from_lab(LabFrameSpec(0, 5, 12, 12.5, 5.2, 7.3))
    assert (d1, d2, d3) == pytest.approx((-0.5, -0.2, -0.3))
    assert abs(d1 - (d2 + d3)) < 1e-12


def test_drives_from_lab_checks_loop():
    drives = drives_from_lab(LabFrameSpec(0, 5, 12, 11, 4, 7), g1=1, g2=1, g3=1)
    assert drives.detunings == (1, 1, 0)

    # Δ1 = 1 pero Δ2 + Δ3 = 0
    with pytest.raises(ValidationError):
        drives_from_lab(LabFrameSpec(0, 5, 12, 11, 5, 7), g1=1, g2=1, g3=1)

    # ω31 ≠ ω21 + ω32: la interacción dependería del tiempo
    with pytest.raises(ValidationError):
        drives_from_lab(LabFrameSpec(0, 5, 12, 11, 5.5, 7), g1=1, g2=1, g3=1)


def test_rho_equals_sigma_with_zero_phases():
    state = _random_state(np.random.default_rng(1))
    drives = DriveSet(1, 1, 1)

    assert np.allclose(rho_from_sigma(state, drives), state.matrix())


def test_rho_of_ground_state_is_diagonal():
    drives = DriveSet(1, 1, 1, phi1=0.3, phi2=1.1, phi3=-2.0)

    rho = rho_from_sigma(SigmaState.ground(), drives)

    assert np.allclose(rho, np.diag([1, 0, 0]))


def test_rho_from_sigma_phase_factors_and_spectrum():
    """Test: ρ13 = σ13 e^{−iφ1}, ρ23 = σ23 e^{−iφ3}, ρ12 = σ12 e^{i(φ3−φ1)}; mismo espectro"""
    rng = np.random.default_rng(2)
    for _ in range(10):
        state = _random_state(rng)
        p1, p2, p3 = rng.uniform(-math.pi, math.pi, size=3)
        drives = DriveSet(1, 1, 1, phi1=p1, phi2=p2, phi3=p3)

        rho = rho_from_sigma(state, drives)

        assert rho[0, 2] == pytest.approx(state.s13 * np.exp(-1j * p1))
        assert rho[1, 2] == pytest.approx(state.s23 * np.exp(-1j * p3))
        assert rho[0, 1] == pytest.approx(state.s12 * np.exp(1j * (p3 - p1)))
        assert np.allclose(rho, rho.conj().T)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.allclose(np.linalg.eigvalsh(rho), np.linalg.eigvalsh(state.matrix()))


def test_curve_presets_cover_both_kinds():
    presets = curve_presets()

    assert len(presets) == 8
    assert presets["a-phi0"].dip_detunings == (-9.98,)
    assert presets["b-phi3pi2"].kind is ConfigurationKind.B
    assert all(p.g_coupling == 10.0 and p.g_probe == 0.1 for p in presets.values())
