# app/utils/phase.py
"""
Parseo/format de fases.

Los archivos de configuración y los flags aceptan:
- radianes como número: "0", "1.5708", "-0.25"
- fracciones de π: "pi", "pi/2", "3pi/2", "3*pi/2", "-pi/4", "2π/3"

Necesitamos:
- convertir a float en radianes
- mostrar la fase de vuelta como fracción de π cuando corresponde (logs, nombres de archivo)
"""

from __future__ import annotations

import math
import re
from typing import Optional


_PI_RE = re.compile(
    r"""^\s*
    (?P<sign>[+-])?\s*
    (?P<coef>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*
    (?:pi|π)
    (?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?
    \s*$""",
    re.IGNORECASE | re.VERBOSE,
)


def phase_to_float(txt: str | float | None) -> Optional[float]:
    """
    Convierte texto de fase a radianes.
    Ej:
      "pi/2"    -> 1.5707963...
      "3*pi/2"  -> 4.7123889...
      "-0.5"    -> -0.5

    Retorna None si no se puede parsear.
    """
    if txt is None:
        return None
    if isinstance(txt, (int, float)):
        value = float(txt)
        return value if math.isfinite(value) else None

    s = str(txt).strip()
    if not s:
        return None

    m = _PI_RE.match(s)
    if m:
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0:
            return None
        value = coef * math.pi / den
        return -value if m.group("sign") == "-" else value

    try:
        value = float(s)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def float_to_phase_txt(value: float, max_den: int = 4) -> str:
    """
    Formato para mostrar: fracción de π si lo es (denominador <= max_den),
    si no radianes con 6 decimales.
    """
    ratio = value / math.pi
    for den in range(1, max_den + 1):
        num = round(ratio * den)
        if abs(ratio * den - num) < 1e-9:
            if num == 0:
                return "0"
            head = {1: "", -1: "-"}.get(num, f"{num}")
            return f"{head}pi" if den == 1 else f"{head}pi/{den}"
    return f"{value:.6f}"
