# app/core/events.py
"""
Definición de eventos del sistema (contrato entre cálculos / runtime / consola).

Objetivo:
- Estandarizar qué mensajes circulan mientras corre un comando.
- Evitar prints sueltos dentro del código numérico.
- Facilitar logging y testeo (un test puede juntar eventos en una lista).

Regla:
- Un evento es SOLO datos + metadata.
- Quién lo muestra (y cómo) lo decide la capa de consola.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional


# =========================================================
# Niveles y tipos de evento
# =========================================================

class EventLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARN = "WARN"
    ERROR = "ERROR"


class EventType(str, Enum):
    # Ciclo de vida del comando
    START = "START"
    CONFIG = "CONFIG"
    END = "END"

    # Cálculos
    STEADY = "STEADY"              # estado estacionario resuelto
    EVOLVE = "EVOLVE"              # evolución temporal terminada
    SCAN = "SCAN"                  # progreso agregado de un barrido
    SCAN_POINT = "SCAN_POINT"      # un punto del barrido (sólo en verbose)
    OPTIMUM = "OPTIMUM"            # óptimo de g1 encontrado
    TIMESCALE = "TIMESCALE"        # tiempo hasta el estacionario
    CHIRAL = "CHIRAL"              # discriminación de enantiómeros

    # Salida / errores
    EXPORT = "EXPORT"
    EXCEPTION = "EXCEPTION"


# =========================================================
# Evento base
# =========================================================

@dataclass(frozen=True)
class Event:
    """
    Evento base del sistema.

    Campos comunes:
    - level: severidad
    - type: tipo semántico
    - message: texto humano (consola)
    - payload: datos estructurados adicionales (dict u objeto)
    """
    level: EventLevel
    type: EventType
    message: str

    payload: Optional[Any] = None


# =========================================================
# Helpers de fábrica (conveniencia)
# =========================================================

def _make(level: EventLevel, type: EventType, message: str, payload: Optional[Any]) -> Event:
    return Event(level=level, type=type, message=message, payload=payload)


def info(type: EventType, message: str, *, payload: Optional[Any] = None) -> Event:
    return _make(EventLevel.INFO, type, message, payload)


def warn(type: EventType, message: str, *, payload: Optional[Any] = None) -> Event:
    return _make(EventLevel.WARN, type, message, payload)


def error(type: EventType, message: str, *, payload: Optional[Any] = None) -> Event:
    return _make(EventLevel.ERROR, type, message, payload)


def debug(type: EventType, message: str, *, payload: Optional[Any] = None) -> Event:
    return _make(EventLevel.DEBUG, type, message, payload)
