# app/core/errors.py
"""
Jerarquía de errores del simulador.

Regla:
- Todo error "esperable" (entrada inválida, solver degenerado, I/O) hereda de
  SimulationError, así el CLI lo traduce a un diagnóstico de una línea.
- Cada subclase hereda además del builtin más cercano (ValueError, RuntimeError...)
  para que el código que ya captura builtins siga funcionando.
"""

from __future__ import annotations

from typing import Optional


class SimulationError(Exception):
    """Base de todos los errores del dominio."""


class ValidationError(SimulationError, ValueError):
    """Parámetros fuera de dominio (amplitudes negativas, Δ₁ ≠ Δ₂ + Δ₃, etc.)."""


class IntegrationError(SimulationError, RuntimeError):
    """El integrador adaptativo no pudo avanzar (paso por debajo del mínimo)."""

    def __init__(self, message: str, *, t_reached: float):
        super().__init__(f"{message} (t alcanzado = {t_reached:.6g}/γ)")
        self.t_reached = t_reached


class DegenerateSteadyStateError(SimulationError, ArithmeticError):
    """Generador singular o mal condicionado: estado estacionario no único."""

    def __init__(
        self,
        message: str,
        *,
        condition: float,
        detuning: Optional[float] = None,
    ):
        extra = f", Δ = {detuning:.6g}" if detuning is not None else ""
        super().__init__(f"{message} (cond = {condition:.3g}{extra})")
        self.condition = condition
        self.detuning = detuning

    def at_detuning(self, detuning: float) -> "DegenerateSteadyStateError":
        """Copia del error con la desintonía del barrido adjunta."""
        base = str(self.args[0]).split(" (cond =")[0]
        return DegenerateSteadyStateError(base, condition=self.condition, detuning=detuning)


class SteadyStateTimeoutError(SimulationError, RuntimeError):
    """time_to_steady no convergió antes de t_max."""

    def __init__(self, message: str, *, t_max: float):
        super().__init__(f"{message} (t_max = {t_max:.6g}/γ)")
        self.t_max = t_max


class NotSteadyStateError(ValidationError):
    """La descomposición de la ganancia sólo vale en el estado estacionario."""

    def __init__(self, message: str, *, residual: float):
        super().__init__(f"{message} (residuo = {residual:.3g})")
        self.residual = residual


class BracketingError(ValidationError):
    """El intervalo dado no encierra un mínimo interior de la ganancia."""


class ConfigError(SimulationError, ValueError):
    """Error de parseo del archivo key=value o de los flags."""

    def __init__(self, message: str, *, line: Optional[int] = None, key: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"línea {line}")
        if key is not None:
            where.append(f"clave '{key}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.key = key


class OutputError(SimulationError, OSError):
    """No se pudo escribir un archivo de salida."""

    def __init__(self, message: str, *, path: str):
        super().__init__(f"{message}: {path}")
        self.path = path
