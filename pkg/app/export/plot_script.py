# app/export/plot_script.py
"""
Genera un script de matplotlib que grafica ganancia vs desintonía
(columna 2 vs columna 1) de uno o más archivos de espectro.

El script es autocontenido: sólo necesita matplotlib. No participa en
ningún cálculo; es una comodidad para reproducir figuras.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

from app.core.errors import OutputError, ValidationError
from app.export.spectrum_io import atomic_write

LINE_STYLES = ("-", "--", "-.", ":")

_TEMPLATE = '''\
"""Ganancia de la sonda vs desintonía. Generado automáticamente."""
import csv
import json

import matplotlib.pyplot as plt

SERIES = {series}
STYLES = {styles}


def read_columns(path):
    if path.lower().endswith(".json"):
        with open(path, encoding="utf-8") as f:
            records = json.load(f)["records"]
        return [r["detuning"] for r in records], [r["gain"] for r in records]
    with open(path, encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))[1:]
    return [float(r[0]) for r in rows], [float(r[1]) for r in rows]


fig, ax = plt.subplots(figsize=(6, 4))
for i, (path, label) in enumerate(SERIES):
    x, y = read_columns(path)
    ax.plot(x, y, STYLES[i % len(STYLES)], color="k", label=label)
ax.axhline(0.0, color="0.6", linewidth=0.8)
ax.set_xlabel({xlabel})
ax.set_ylabel("Probe gain")
if len(SERIES) > 1:
    ax.legend()
fig.tight_layout()
plt.show()
'''


def emit_plot_script(
    data_paths: Sequence[Path | str],
    script_path: Optional[Path | str] = None,
    *,
    labels: Optional[Sequence[str]] = None,
    xlabel: str = "Detuning (γ)",
) -> Path:
    """
    Escribe el script junto al primer archivo (<stem>_plot.py) salvo que se indique script_path.
    Con varios archivos las curvas se superponen (sólida, rayada, ...).

    Raises:
        ValidationError: sin archivos o cantidad de labels distinta.
        OutputError: algún archivo de datos no existe o falla la escritura.
    """
    paths = [Path(p) for p in data_paths]
    if not paths:
        raise ValidationError("Se requiere al menos un archivo de espectro")
    for p in paths:
        if not p.exists():
            raise OutputError("Archivo de espectro no encontrado", path=str(p))
    labels = list(labels) if labels is not None else [p.stem for p in paths]
    if len(labels) != len(paths):
        raise ValidationError("labels debe tener un elemento por archivo")

    target = Path(script_path) if script_path else paths[0].with_name(f"{paths[0].stem}_plot.py")
    series = [(str(p.resolve()), label) for p, label in zip(paths, labels)]
    text = _TEMPLATE.format(series=repr(series), styles=repr(LINE_STYLES), xlabel=repr(xlabel))
    return atomic_write(target, lambda h: h.write(text))
