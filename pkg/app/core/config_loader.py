# app/core/config_loader.py
"""
Cargador de configuraciones de corrida (archivos key=value).

Formato:
- una clave por línea: `clave = valor`
- '#' inicia un comentario (línea completa o al final)
- las claves aceptan '-' o '_' indistintamente (g-aux == g_aux)

Prioridad (de menor a mayor):
    RUN_DEFAULTS < COMMAND_DEFAULTS < preset < archivo < flags de línea de comando

Las corridas son 100% reproducibles: el mismo RunConfig produce la misma salida.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

from app.core.errors import ConfigError, ValidationError
from app.core.model import curve_presets
from app.models.domain import ConfigurationKind, DecayRates, FluxQubitParams
from app.utils.phase import phase_to_float


COMMANDS = ("steady", "spectrum", "optimize", "aux-scan", "evolve", "chiral", "fluxqubit", "phase-scan")
FORMATS = ("csv", "json", "xlsx")
INITIAL_STATES = ("ground", "excited2", "excited3")


@dataclass(frozen=True)
class RunConfig:
    """
    Configuración tipada de una corrida.

    Todas las magnitudes están normalizadas a γ salvo las del comando fluxqubit
    (gamma_ref en s⁻¹).
    """
    command: str
    kind: ConfigurationKind = ConfigurationKind.A
    g_coupling: float = 10.0
    g_probe: float = 0.1
    g_aux: float = 0.0
    phi: float = 0.0
    detuning: float = 0.0

    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0

    # spectrum / chiral
    d_min: float = -20.0
    d_max: float = 20.0
    points: int = 1001
    offset: float = math.pi

    # optimize / aux-scan
    g_max: float = 12.0
    bracket_lo: float = 0.0
    bracket_hi: float = 12.0

    # evolve
    t_final: float = 50.0
    rel_tol: float = 1e-8
    initial: str = "ground"

    # fluxqubit
    t01: float = 0.19
    t02: float = 0.14
    t12: float = 0.19
    gamma_ref: float = 6.9e7
    t_ref: float = 0.66
    eps: float = 1e-3

    # salida
    out: Optional[str] = None
    format: str = "csv"
    plot: bool = False
    workers: int = 1
    preset: Optional[str] = None

    @property
    def decays(self) -> DecayRates:
        return DecayRates(self.gamma1, self.gamma2, self.gamma3)

    @property
    def bracket(self) -> tuple[float, float]:
        return (self.bracket_lo, self.bracket_hi)

    @property
    def flux_params(self) -> FluxQubitParams:
        return FluxQubitParams(
            t01=self.t01, t02=self.t02, t12=self.t12,
            gamma_ref=self.gamma_ref, t_ref=self.t_ref,
        )


# Valores por defecto de todas las claves (un único lugar)
RUN_DEFAULTS: dict[str, Any] = {
    f.name: f.default for f in fields(RunConfig) if f.name != "command"
}

# Claves que cada comando exige explícitamente (archivo, preset o flag)
REQUIRED_KEYS: dict[str, tuple[str, ...]] = {
    "steady": ("kind", "g_aux", "detuning"),
    "spectrum": ("kind", "g_aux", "phi"),
    "optimize": ("kind", "phi", "detuning"),
    "aux-scan": ("kind", "phi", "detuning"),
    "evolve": ("kind", "g_aux", "detuning", "t_final"),
    "chiral": ("kind", "g_aux", "phi"),
    "fluxqubit": (),
    "phase-scan": ("kind", "g_aux", "detuning"),
}

# Valores propios de un comando (por debajo de preset, archivo y flags)
COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "fluxqubit": {"g_aux": 0.74, "detuning": -9.98},
}


# -------------------------
# Conversores por tipo de clave
# -------------------------

def _to_float(raw: str) -> float:
    value = float(raw)
    if not math.isfinite(value):
        raise ValueError("no finito")
    return value


def _to_int(raw: str) -> int:
    return int(raw)


def _to_phase(raw: str) -> float:
    value = phase_to_float(raw)
    if value is None:
        raise ValueError("fase inválida (radianes o literal tipo 'pi/2')")
    return value


def _to_bool(raw: str) -> bool:
    s = raw.strip().lower()
    if s in ("1", "true", "yes", "si", "sí", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError("booleano inválido")


def _one_of(options: tuple[str, ...]) -> Callable[[str], str]:
    def convert(raw: str) -> str:
        s = raw.strip().lower()
        if s not in options:
            raise ValueError(f"debe ser uno de {', '.join(options)}")
        return s
    return convert


def _to_preset(raw: str) -> str:
    s = raw.strip()
    if s not in curve_presets():
        raise ValueError(f"preset desconocido; opciones: {', '.join(curve_presets())}")
    return s


CONVERTERS: dict[str, Callable[[str], Any]] = {
    "command": _one_of(COMMANDS),
    "kind": ConfigurationKind.parse,
    "phi": _to_phase,
    "offset": _to_phase,
    "points": _to_int,
    "workers": _to_int,
    "initial": _one_of(INITIAL_STATES),
    "out": str.strip,
    "format": _one_of(FORMATS),
    "plot": _to_bool,
    "preset": _to_preset,
}
for _name in RUN_DEFAULTS:
    CONVERTERS.setdefault(_name, _to_float)


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


class ConfigLoader:
    """Parsea y valida configuraciones key=value."""

    @staticmethod
    def load(path: Path | str, overrides: Optional[Mapping[str, str]] = None) -> RunConfig:
        """
        Carga un archivo de configuración.

        Raises:
            ConfigError: archivo inexistente o contenido inválido.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Archivo de configuración no encontrado: {path}")
        text = path.read_text(encoding="utf-8")
        return ConfigLoader.parse(text, overrides)

    @staticmethod
    def parse(text: str, overrides: Optional[Mapping[str, str]] = None) -> RunConfig:
        """
        Parsea el texto key=value y aplica overrides (flags).

        Raises:
            ConfigError: clave desconocida, valor mal formado, clave requerida faltante.
        """
        entries = ConfigLoader.read_pairs(text)
        for key, raw in (overrides or {}).items():
            if raw is None:
                continue
            entries[normalize_key(key)] = (str(raw), None)
        return ConfigLoader.from_entries(entries)

    @staticmethod
    def read_pairs(text: str) -> dict[str, tuple[str, Optional[int]]]:
        """clave normalizada → (valor crudo, número de línea)."""
        entries: dict[str, tuple[str, Optional[int]]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            if "=" not in content:
                raise ConfigError("Se esperaba 'clave = valor'", line=lineno)
            key, raw = content.split("=", 1)
            key = normalize_key(key)
            if not key:
                raise ConfigError("Clave vacía", line=lineno)
            if key not in CONVERTERS:
                raise ConfigError("Clave desconocida", line=lineno, key=key)
            if key in entries:
                raise ConfigError("Clave repetida", line=lineno, key=key)
            entries[key] = (raw.strip(), lineno)
        return entries

    @staticmethod
    def from_entries(entries: Mapping[str, tuple[str, Optional[int]]]) -> RunConfig:
        values: dict[str, Any] = {}
        for key, (raw, lineno) in entries.items():
            if key not in CONVERTERS:
                raise ConfigError("Clave desconocida", line=lineno, key=key)
            try:
                values[key] = CONVERTERS[key](raw)
            except (ValueError, ValidationError) as exc:
                raise ConfigError(f"Valor inválido {raw!r}: {exc}", line=lineno, key=key) from exc

        if "command" not in values:
            raise ConfigError("Falta el comando", key="command")

        provided = set(values)
        base: dict[str, Any] = dict(COMMAND_DEFAULTS.get(values["command"], {}))
        preset_name = values.get("preset")
        if preset_name:
            p = curve_presets()[preset_name]
            base |= {
                "kind": p.kind,
                "g_coupling": p.g_coupling,
                "g_probe": p.g_probe,
                "g_aux": p.g_aux,
                "phi": p.Phi,
                "detuning": p.dip_detunings[-1],
            }
            provided |= set(base)

        ConfigLoader._validate_required_fields(values["command"], provided)

        config = replace(RunConfig(command=values["command"]), **{**base, **values})
        ConfigLoader._validate_ranges(config)
        return config

    @staticmethod
    def _validate_required_fields(command: str, provided: set[str]) -> None:
        """Valida que estén todas las claves requeridas por el comando."""
        for key in REQUIRED_KEYS[command]:
            if key not in provided:
                raise ConfigError(f"Clave requerida faltante para '{command}'", key=key)

    @staticmethod
    def _validate_ranges(config: RunConfig) -> None:
        checks = (
            ("points", config.points >= 2, "debe ser >= 2"),
            ("workers", config.workers >= 1, "debe ser >= 1"),
            ("d_max", config.d_max > config.d_min, "debe ser mayor que d_min"),
            ("g_max", config.g_max > 0, "debe ser > 0"),
            ("bracket_hi", config.bracket_hi > config.bracket_lo >= 0, "se requiere 0 <= bracket_lo < bracket_hi"),
            ("t_final", config.t_final > 0, "debe ser > 0"),
            ("rel_tol", 1e-14 < config.rel_tol < 1e-3, "debe estar en (1e-14, 1e-3)"),
            ("eps", 1e-10 < config.eps < 1e-1, "debe estar en (1e-10, 1e-1)"),
        )
        for key, ok, message in checks:
            if not ok:
                raise ConfigError(message, key=key)
        for key in ("g_coupling", "g_probe", "g_aux", "gamma1", "gamma2", "gamma3"):
            if getattr(config, key) < 0:
                raise ConfigError("no puede ser negativo", key=key)
