# app/version.py
"""
Versión de la aplicación.

Para publicar una nueva versión:
  1. Actualizar VERSION_ACTUAL.
  2. Actualizar version.txt en el repositorio con el mismo número.
"""

from __future__ import annotations

# ─── Versión actual de la app ────────────────────────────────────────────────
VERSION_ACTUAL = "1.0.0"

# ─── Nombre visible en el CLI ────────────────────────────────────────────────
APP_NAME = "cyclic-lwi"
APP_DESCRIPTION = (
    "Ganancia sin inversión en un sistema cíclico de tres niveles (tipo Δ) "
    "con tres campos coherentes"
)
