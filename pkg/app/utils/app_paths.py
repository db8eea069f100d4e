# app/utils/app_paths.py
from __future__ import annotations

from pathlib import Path


def get_project_root() -> Path:
    return Path(__file__).resolve().parents[2]


def get_data_dir() -> Path:
    return get_project_root() / "data"


def get_configs_dir() -> Path:
    """Configuraciones de ejemplo (una por curva de ganancia y por comando)."""
    return get_data_dir() / "configs"


def resolve_config_path(name: str | Path) -> Path:
    """
    Acepta una ruta existente o el nombre de una configuración de ejemplo
    (con o sin extensión .cfg), p. ej. "spectrum_a_phi0".
    """
    path = Path(name)
    if path.exists():
        return path
    candidate = get_configs_dir() / path.name
    if candidate.suffix != ".cfg":
        candidate = candidate.with_suffix(".cfg")
    if candidate.exists():
        return candidate
    return path
