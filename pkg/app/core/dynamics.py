# app/core/dynamics.py
"""
Ecuaciones de movimiento del sistema cíclico, evolución temporal y estado estacionario.

Objetivo:
- eom_rhs: lados derechos de las ecuaciones para σ₁₁, σ₂₂, σ₁₂, σ₁₃, σ₂₃ con
  σ₃₃ = 1 − σ₁₁ − σ₂₂ sustituido (la traza se conserva por construcción).
- build_generator: la misma dinámica en forma afín real dx/dt = A·x + c sobre el
  vector empaquetado de 8 componentes.
- evolve: RK4 explícito con control de paso por duplicación (step doubling).
- steady_state: resuelve A·x = −c.
- time_to_steady: tiempo hasta quedar a menos de eps del estacionario.

Empaquetado (StateVector8), orden fijo:
    x = (σ₁₁, σ₂₂, Re σ₁₂, Im σ₁₂, Re σ₁₃, Im σ₁₃, Re σ₂₃, Im σ₂₃)

Nota: en la ecuación de σ₁₁ el término que acopla σ₁₂ lleva g₂ (el campo 1↔2),
como sale del hamiltoniano; es la única lectura que mantiene ρ positiva.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from app.core.errors import (
    DegenerateSteadyStateError,
    IntegrationError,
    SteadyStateTimeoutError,
    ValidationError,
)
from app.core.events import Event, EventType, debug, info
from app.models.domain import DecayRates, DriveSet, SigmaState

STATE_SIZE = 8
PACKING = ("s11", "s22", "re_s12", "im_s12", "re_s13", "im_s13", "re_s23", "im_s23")

# Umbral de condición para declarar el estacionario degenerado
MAX_CONDITION = 1e12

# Grilla geométrica de time_to_steady (en unidades de 1/γ)
SETTLE_T_MIN = 1e-3
SETTLE_T_MAX = 1e4
SETTLE_POINTS_PER_DECADE = 40

EventSink = Callable[[Event], None]


# -------------------------
# Empaquetado
# -------------------------

def pack_state(state: SigmaState) -> np.ndarray:
    """SigmaState → vector real de 8 componentes (ver PACKING)."""
    s12, s13, s23 = complex(state.s12), complex(state.s13), complex(state.s23)
    return np.array(
        [state.s11, state.s22, s12.real, s12.imag, s13.real, s13.imag, s23.real, s23.imag],
        dtype=float,
    )


def unpack_state(x: Sequence[float]) -> SigmaState:
    """Inversa de pack_state."""
    if len(x) != STATE_SIZE:
        raise ValidationError(f"Se esperaban {STATE_SIZE} componentes, recibido {len(x)}")
    return SigmaState(
        s11=float(x[0]),
        s22=float(x[1]),
        s12=complex(x[2], x[3]),
        s13=complex(x[4], x[5]),
        s23=complex(x[6], x[7]),
    )


def state_distance(x: np.ndarray, y: np.ndarray) -> float:
    """
    Norma máxima de σ(x) − σ(y) sobre los elementos de la matriz
    (poblaciones incluida σ₃₃, coherencias por módulo).
    """
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return float(
        max(
            abs(d[0]),
            abs(d[1]),
            abs(d[0] + d[1]),
            math.hypot(d[2], d[3]),
            math.hypot(d[4], d[5]),
            math.hypot(d[6], d[7]),
        )
    )


# -------------------------
# Ecuaciones de movimiento
# -------------------------

@dataclass(frozen=True)
class SigmaDerivative:
    """dσ/dt; d33 = −(d11 + d22)."""
    d11: float
    d22: float
    d12: complex
    d13: complex
    d23: complex

    @property
    def d33(self) -> float:
        return -(self.d11 + self.d22)

    def as_vector(self) -> np.ndarray:
        return np.array(
            [
                self.d11, self.d22,
                self.d12.real, self.d12.imag,
                self.d13.real, self.d13.imag,
                self.d23.real, self.d23.imag,
            ],
            dtype=float,
        )

    def max_norm(self) -> float:
        return float(max(abs(self.d11), abs(self.d22), abs(self.d33), abs(self.d12), abs(self.d13), abs(self.d23)))


def eom_rhs(state: SigmaState, drives: DriveSet, decays: DecayRates) -> SigmaDerivative:
    """Lados derechos de las cinco ecuaciones de movimiento en el marco rotado."""
    g1, g2, g3 = drives.amplitudes
    d1, d2, d3 = drives.detunings
    e_phi = cmath.exp(1j * drives.relative_phase)
    e_phi_c = e_phi.conjugate()

    s11, s22, s33 = state.s11, state.s22, state.s33
    s12, s13, s23 = complex(state.s12), complex(state.s13), complex(state.s23)
    s21, s32 = s12.conjugate(), s23.conjugate()

    d11 = (
        decays.gamma1 * s33
        + decays.gamma2 * s22
        - 2.0 * (1j * g1 * s13 + 1j * g2 * s12 * e_phi).real
    )
    d22 = (
        -decays.gamma2 * s22
        + decays.gamma3 * s33
        + 2.0 * (1j * g2 * s12 * e_phi - 1j * g3 * s23).real
    )
    d12 = (
        (-decays.Gamma12 + 1j * d2) * s12
        - 1j * g3 * s13
        + 1j * g1 * s32
        + 1j * g2 * e_phi_c * (s22 - s11)
    )
    d13 = (
        (-decays.Gamma13 + 1j * d1) * s13
        + 1j * g1 * (s33 - s11)
        + 1j * g2 * s23 * e_phi_c
        - 1j * g3 * s12
    )
    d23 = (
        (-decays.Gamma23 + 1j * d3) * s23
        + 1j * g2 * s13 * e_phi
        - 1j * g1 * s21
        + 1j * g3 * (s33 - s22)
    )
    return SigmaDerivative(d11=float(d11), d22=float(d22), d12=d12, d13=d13, d23=d23)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Forma afín de la dinámica: dx/dt = A·x + c (x empaquetado según PACKING)."""
    A: np.ndarray
    c: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.A @ x + self.c

    def slowest_rate(self) -> float:
        """Menor |Re λ| del generador: la escala de relajación más lenta."""
        return float(np.min(np.abs(np.linalg.eigvals(self.A).real)))


def build_generator(drives: DriveSet, decays: DecayRates) -> GeneratorMatrix:
    """
    Matriz A (8x8) y vector c tales que A·x + c reproduce eom_rhs.

    Columnas: s11, s22, a=Re σ12, b=Im σ12, c=Re σ13, d=Im σ13, e=Re σ23, f=Im σ23.
    """
    g1, g2, g3 = drives.amplitudes
    d1, d2, d3 = drives.detunings
    phi = drives.relative_phase
    C, S = math.cos(phi), math.sin(phi)
    y1, y2, y3 = decays.gamma1, decays.gamma2, decays.gamma3
    G12, G13, G23 = decays.Gamma12, decays.Gamma13, decays.Gamma23

    A = np.zeros((STATE_SIZE, STATE_SIZE))
    c = np.zeros(STATE_SIZE)

    # σ11
    A[0] = [-y1, y2 - y1, 2 * g2 * S, 2 * g2 * C, 0.0, 2 * g1, 0.0, 0.0]
    c[0] = y1
    # σ22
    A[1] = [-y3, -y2 - y3, -2 * g2 * S, -2 * g2 * C, 0.0, 0.0, 0.0, 2 * g3]
    c[1] = y3
    # σ12
    A[2] = [-g2 * S, g2 * S, -G12, -d2, 0.0, g3, 0.0, g1]
    A[3] = [-g2 * C, g2 * C, d2, -G12, -g3, 0.0, g1, 0.0]
    # σ13
    A[4] = [0.0, 0.0, 0.0, g3, -G13, -d1, g2 * S, -g2 * C]
    A[5] = [-2 * g1, -g1, -g3, 0.0, d1, -G13, g2 * C, g2 * S]
    c[5] = g1
    # σ23
    A[6] = [0.0, 0.0, 0.0, -g1, -g2 * S, -g2 * C, -G23, -d3]
    A[7] = [-g3, -2 * g3, -g1, 0.0, g2 * C, -g2 * S, d3, -G23]
    c[7] = g3

    return GeneratorMatrix(A=A, c=c)


# -------------------------
# Estado estacionario
# -------------------------

def steady_state(drives: DriveSet, decays: DecayRates) -> SigmaState:
    """
    Punto fijo único de la dinámica afín (A·x = −c).

    Raises:
        DegenerateSteadyStateError: A singular o con condición > MAX_CONDITION.
    """
    gen = build_generator(drives, decays)
    condition = float(np.linalg.cond(gen.A))
    if not math.isfinite(condition) or condition > MAX_CONDITION:
        raise DegenerateSteadyStateError(
            "Estado estacionario degenerado o mal condicionado", condition=condition
        )
    try:
        x = np.linalg.solve(gen.A, -gen.c)
    except np.linalg.LinAlgError:
        raise DegenerateSteadyStateError(
            "Generador singular", condition=condition
        ) from None
    return unpack_state(x)


def steady_state_residual(state: SigmaState, drives: DriveSet, decays: DecayRates) -> float:
    """Norma máxima de eom_rhs(state)."""
    return eom_rhs(state, drives, decays).max_norm()


# -------------------------
# Evolución temporal
# -------------------------

@dataclass(frozen=True)
class Trajectory:
    """Puntos (t, σ(t)) de una evolución; final es σ(t_final)."""
    times: tuple[float, ...]
    states: tuple[SigmaState, ...]
    final: SigmaState
    accepted_steps: int = 0
    rejected_steps: int = 0

    def __iter__(self):
        return iter(zip(self.times, self.states))

    def __len__(self) -> int:
        return len(self.times)


def _rk4_step(A: np.ndarray, c: np.ndarray, x: np.ndarray, h: float) -> np.ndarray:
    k1 = A @ x + c
    k2 = A @ (x + 0.5 * h * k1) + c
    k3 = A @ (x + 0.5 * h * k2) + c
    k4 = A @ (x + h * k3) + c
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(
    initial: SigmaState,
    drives: DriveSet,
    decays: DecayRates,
    t_final: float,
    rel_tol: float = 1e-8,
    *,
    t_eval: Optional[Iterable[float]] = None,
) -> Trajectory:
    """
    Integra desde t = 0 hasta t_final con RK4 y control por duplicación de paso.

    Cada paso se da completo (h) y como dos medios pasos (h/2); la diferencia/15
    estima el error local, se compara con rel_tol·max(1, |x|∞) y se acepta el
    resultado extrapolado. Si t_eval se da, la trayectoria registra exactamente
    esos tiempos (el integrador aterriza sobre ellos); si no, registra cada
    paso aceptado.

    Raises:
        ValidationError: t_final <= 0 o rel_tol fuera de (1e-14, 1e-3).
        IntegrationError: el paso cae por debajo de 1e-12·max(1, t).
    """
    if not (math.isfinite(t_final) and t_final > 0):
        raise ValidationError(f"t_final debe ser > 0, recibido {t_final!r}")
    if not (1e-14 < rel_tol < 1e-3):
        raise ValidationError(f"rel_tol debe estar en (1e-14, 1e-3), recibido {rel_tol!r}")

    targets: list[float]
    if t_eval is None:
        targets = [t_final]
        record_every_step = True
    else:
        targets = sorted({float(t) for t in t_eval if 0.0 < float(t) <= t_final})
        if not targets or targets[-1] < t_final:
            targets.append(t_final)
        record_every_step = False
    eval_set = set(targets) if t_eval is not None else set()

    gen = build_generator(drives, decays)
    A, c = gen.A, gen.c
    x = pack_state(initial)
    t = 0.0

    times: list[float] = [0.0]
    states: list[SigmaState] = [initial]

    scale_rate = max(1.0, float(np.max(np.sum(np.abs(A), axis=1))))
    h = min(t_final, 0.1 / scale_rate)
    accepted = rejected = 0

    for target in targets:
        while t < target:
            remaining = target - t
            clipped = h >= remaining
            h_try = remaining if clipped else h

            full = _rk4_step(A, c, x, h_try)
            half = _rk4_step(A, c, _rk4_step(A, c, x, 0.5 * h_try), 0.5 * h_try)
            diff = half - full
            err = float(np.max(np.abs(diff))) / 15.0
            tol = rel_tol * max(1.0, float(np.max(np.abs(half))))

            if err <= tol:
                x = half + diff / 15.0
                t = target if clipped else t + h_try
                accepted += 1
                if record_every_step or (clipped and target in eval_set):
                    times.append(t)
                    states.append(unpack_state(x))
            else:
                rejected += 1

            factor = 4.0 if err == 0.0 else min(4.0, max(0.2, 0.9 * (tol / err) ** 0.2))
            h_new = h_try * factor
            # un paso recortado para aterrizar en target no achica el paso nominal
            h = max(h, h_new) if (clipped and err <= tol) else h_new
            if h < 1e-12 * max(1.0, t):
                raise IntegrationError("Paso de integración por debajo del mínimo", t_reached=t)

    final = unpack_state(x)
    if times[-1] != t_final:
        times.append(t_final)
        states.append(final)
    return Trajectory(
        times=tuple(times),
        states=tuple(states),
        final=final,
        accepted_steps=accepted,
        rejected_steps=rejected,
    )


def propagate(
    initial: SigmaState,
    drives: DriveSet,
    decays: DecayRates,
    times: Sequence[float],
) -> list[SigmaState]:
    """
    σ(t) exacto para la dinámica lineal: x(t) = x_ss + e^{A t}(x₀ − x_ss).
    Requiere un estacionario no degenerado.
    """
    gen = build_generator(drives, decays)
    x_ss = pack_state(steady_state(drives, decays))
    d0 = pack_state(initial) - x_ss
    return [unpack_state(x_ss + expm(gen.A * float(t)) @ d0) for t in times]


def time_to_steady(
    drives: DriveSet,
    decays: DecayRates,
    initial: Optional[SigmaState] = None,
    eps: float = 1e-3,
    *,
    t_max: float = SETTLE_T_MAX,
    emit: Optional[EventSink] = None,
) -> float:
    """
    Menor tiempo muestreado t (en 1/γ) a partir del cual |σ(t) − σ_ss|∞ < eps.

    Se muestrea una grilla geométrica (SETTLE_POINTS_PER_DECADE por década desde
    SETTLE_T_MIN); un punto vale si todas las muestras de la década siguiente
    también están por debajo de eps y esa década cabe entera antes de t_max.
    Estado inicial por defecto: fundamental.

    Raises:
        ValidationError: eps fuera de (1e-10, 1e-1).
        SteadyStateTimeoutError: no converge antes de t_max.
    """
    if not (1e-10 < eps < 1e-1):
        raise ValidationError(f"eps debe estar en (1e-10, 1e-1), recibido {eps!r}")
    initial = initial or SigmaState.ground()

    gen = build_generator(drives, decays)
    x_ss = pack_state(steady_state(drives, decays))
    d0 = pack_state(initial) - x_ss

    if state_distance(d0, np.zeros(STATE_SIZE)) < eps:
        if emit:
            emit(info(EventType.TIMESCALE, "Estado inicial ya estacionario", payload={"t": 0.0}))
        return 0.0

    n_decades = math.log10(t_max / SETTLE_T_MIN)
    n_points = int(round(n_decades * SETTLE_POINTS_PER_DECADE)) + 1
    grid = SETTLE_T_MIN * np.power(10.0, np.arange(n_points) / SETTLE_POINTS_PER_DECADE)
    grid = grid[grid <= t_max * (1 + 1e-12)]

    deviations = np.array([state_distance(expm(gen.A * t) @ d0, np.zeros(STATE_SIZE)) for t in grid])
    below = deviations < eps

    for k, t_k in enumerate(grid):
        if not below[k]:
            continue
        if 10.0 * t_k > t_max * (1 + 1e-12):
            break
        tail = (grid >= t_k) & (grid <= 10.0 * t_k)
        if np.all(below[tail]):
            if emit:
                emit(
                    info(
                        EventType.TIMESCALE,
                        f"Estacionario alcanzado en t = {t_k:.4g}/γ (eps = {eps:g})",
                        payload={"t": float(t_k), "eps": eps},
                    )
                )
            return float(t_k)
        if emit:
            emit(debug(EventType.TIMESCALE, f"Cola no monótona en t = {t_k:.4g}/γ"))

    raise SteadyStateTimeoutError("No se alcanzó el estado estacionario", t_max=t_max)
