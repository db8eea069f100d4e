# tests/test_config_loader.py
"""
Tests unitarios para ConfigLoader.
"""

import math
from pathlib import Path

import pytest

from app.core.config_loader import COMMANDS, REQUIRED_KEYS, RUN_DEFAULTS, ConfigLoader, RunConfig
from app.core.errors import ConfigError
from app.models.domain import ConfigurationKind
from app.utils.app_paths import get_configs_dir


def test_load_example_config():
    """Test: Cargar spectrum_a_phi0.cfg"""
    config = ConfigLoader.load(get_configs_dir() / "spectrum_a_phi0.cfg")

    assert config.command == "spectrum"
    assert config.kind is ConfigurationKind.A
    assert config.g_aux == 0.74
    assert config.points == 1001
    assert config.decays.gamma1 == 1.0


def test_all_example_configs_parse():
    """Test: Todos los ejemplos de data/configs son válidos"""
    paths = sorted(get_configs_dir().glob("*.cfg"))

    assert len(paths) >= 10
    for path in paths:
        config = ConfigLoader.load(path)
        assert config.command in COMMANDS, path.name


def test_parse_comments_dashes_and_phase_literals():
    text = """
    # comentario de línea completa
    command = spectrum
    kind = B        # al final de la línea
    g-aux = 1.52
    phi = 3pi/2
    """

    config = ConfigLoader.parse(text)

    assert config.kind is ConfigurationKind.B
    assert config.g_aux == 1.52
    assert config.phi == pytest.approx(3 * math.pi / 2)


def test_overrides_take_priority_over_file():
    text = "command = spectrum\nkind = a\ng_aux = 0.74\nphi = 0\npoints = 11\n"

    config = ConfigLoader.parse(text, {"points": "21", "g-aux": "1.0", "phi": None})

    assert config.points == 21
    assert config.g_aux == 1.0
    assert config.phi == 0.0


def test_defaults_fill_missing_optional_keys():
    config = ConfigLoader.parse("command = steady\nkind = a\ng_aux = 0\ndetuning = 0\n")

    assert config.g_coupling == RUN_DEFAULTS["g_coupling"] == 10.0
    assert config.format == "csv"
    assert config.out is None
    assert config.offset == math.pi


def test_fluxqubit_has_its_own_defaults():
    config = ConfigLoader.parse("command = fluxqubit\n")

    assert config.g_aux == 0.74
    assert config.detuning == -9.98
    assert config.flux_params.gamma_ref == 6.9e7


def test_preset_fills_curve_parameters():
    config = ConfigLoader.parse("command = optimize\npreset = a-phipi2\n")

    assert config.kind is ConfigurationKind.A
    assert config.g_aux == 1.70
    assert config.phi == pytest.approx(math.pi / 2)
    assert config.detuning == 12.12


def test_explicit_value_beats_preset():
    config = ConfigLoader.parse("command = spectrum\npreset = b-phi0\ng_aux = 2.0\n")

    assert config.kind is ConfigurationKind.B
    assert config.g_aux == 2.0


def test_missing_required_key_names_the_key():
    with pytest.raises(ConfigError) as info:
        ConfigLoader.parse("command = spectrum\nkind = a\nphi = 0\n")

    assert info.value.key == "g_aux"


def test_missing_command():
    with pytest.raises(ConfigError) as info:
        ConfigLoader.parse("kind = a\n")

    assert info.value.key == "command"


@pytest.mark.parametrize(
    "text, line, key",
    [
        ("command = spectrum\nkind\n", 2, None),
        ("command = spectrum\nfoo = 1\n", 2, "foo"),
        ("command = spectrum\nkind = a\nkind = b\n", 3, "kind"),
        ("command = spectrum\nkind = c\n", 2, "kind"),
        ("command = spectrum\npoints = diez\n", 2, "points"),
        ("command = spectrum\nphi = medio pi\n", 2, "phi"),
        ("command = espectro\n", 1, "command"),
    ],
)
def test_parse_errors_carry_line_and_key(text, line, key):
    with pytest.raises(ConfigError) as info:
        ConfigLoader.parse(text)

    assert info.value.line == line
    assert info.value.key == key
    assert f"línea {line}" in str(info.value)


@pytest.mark.parametrize(
    "extra, key",
    [
        ("points = 1", "points"),
        ("d_min = 5\nd_max = -5", "d_max"),
        ("workers = 0", "workers"),
        ("gamma2 = -1", "gamma2"),
        ("eps = 0.5", "eps"),
        ("bracket_lo = 3\nbracket_hi = 1", "bracket_hi"),
    ],
)
def test_range_validation(extra, key):
    text = f"command = spectrum\nkind = a\ng_aux = 0.74\nphi = 0\n{extra}\n"

    with pytest.raises(ConfigError) as info:
        ConfigLoader.parse(text)

    assert info.value.key == key


def test_missing_file(tmp_path: Path):
    with pytest.raises(ConfigError):
        ConfigLoader.load(tmp_path / "no_existe.cfg")


def test_required_keys_cover_every_command():
    assert set(REQUIRED_KEYS) == set(COMMANDS)
    assert set(RUN_DEFAULTS) == {f for f in RunConfig.__dataclass_fields__ if f != "command"}
