# app/ui/console_logger.py
"""
Logger de consola que consume los eventos del runtime.

Responsabilidades:
- Mostrar sólo lo relevante: DEBUG y SCAN_POINT se ignoran salvo en modo verbose.
- Formato legible: "HH:MM:SS [LEVEL] mensaje", con color por nivel.
- Guardar un historial acotado (para tests o para volcarlo al final).

La salida va a stderr; stdout queda para los resultados (tablas/JSON).
"""

from __future__ import annotations

import sys
from datetime import datetime
from queue import Empty, Queue
from typing import Optional, TextIO

from colorama import Fore, Style, just_fix_windows_console

from app.core.events import Event, EventLevel, EventType


LEVEL_COLORS = {
    EventLevel.DEBUG: Style.DIM,
    EventLevel.INFO: "",
    EventLevel.WARN: Fore.YELLOW,
    EventLevel.ERROR: Fore.RED + Style.BRIGHT,
}

# Tipos que sólo se muestran en modo verbose
NOISY_TYPES = {EventType.SCAN_POINT}


class ConsoleLogger:
    """
    Estrategia:
    - Ignora DEBUG y eventos ruidosos (a menos que verbose)
    - Colorea sólo si el stream es una terminal (o si se fuerza color=True)
    """

    def __init__(
        self,
        stream: Optional[TextIO] = None,
        *,
        verbose: bool = False,
        max_lines: int = 200,
        color: Optional[bool] = None,
    ):
        self.stream = stream if stream is not None else sys.stderr
        self.verbose = bool(verbose)
        self.max_lines = max_lines
        self.logs: list[tuple[str, str, str]] = []  # (timestamp, level, message)

        if color is None:
            color = bool(getattr(self.stream, "isatty", lambda: False)())
        self.color = color
        if self.color:
            just_fix_windows_console()

    def wants(self, event: Event) -> bool:
        if self.verbose:
            return True
        return event.level is not EventLevel.DEBUG and event.type not in NOISY_TYPES

    def handle(self, event: Event) -> Optional[str]:
        """Registra y escribe un evento; retorna la línea o None si se filtró."""
        if not self.wants(event):
            return None
        ts = datetime.now().strftime("%H:%M:%S")
        level = event.level.value
        self.logs.append((ts, level, event.message))
        if len(self.logs) > self.max_lines:
            self.logs.pop(0)

        line = f"{ts} [{level}] {event.message}"
        if self.color:
            self.stream.write(f"{LEVEL_COLORS[event.level]}{line}{Style.RESET_ALL}\n")
        else:
            self.stream.write(line + "\n")
        self.stream.flush()
        return line

    def drain(self, q: Queue) -> int:
        """Consume todo lo que haya en la cola sin bloquear."""
        count = 0
        while True:
            try:
                ev = q.get_nowait()
            except Empty:
                return count
            self.handle(ev)
            count += 1

    def get_lines(self, count: Optional[int] = None) -> list[str]:
        """Retorna últimas N líneas formateadas (sin color)."""
        count = count or len(self.logs)
        return [f"{ts} [{level}] {msg}" for ts, level, msg in self.logs[-count:]]

    def clear(self) -> None:
        self.logs.clear()
