# app/core/app_runtime.py
"""
Orquestador de corridas (AppRuntime).

Objetivo:
- Ejecutar un comando (RunConfig) y publicar su progreso como eventos en una cola.
- Separar el cálculo (thread dedicado) de la consola (consume la cola).
- Juntar en un RunOutcome lo que el CLI necesita: archivos escritos, texto
  para stdout y el error si lo hubo.

Nota:
- Los cálculos no imprimen nunca; todo pasa por out_q.
- La salida primaria (tablas/JSON) es determinística: no lleva timestamps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from queue import Empty, Queue
from threading import Thread
from typing import Callable, Optional

from app.core.applications import enantiomer_spectra, flux_qubit_rates, si_steady_time
from app.core.config_loader import RunConfig
from app.core.dynamics import PACKING, evolve, pack_state, steady_state, steady_state_residual
from app.core.errors import NotSteadyStateError, SimulationError, ValidationError
from app.core.events import Event, EventType, error, info, warn
from app.core.model import build_config
from app.core.optimize import optimal_aux_amplitude, scan_aux_amplitude
from app.core.spectra import (
    decompose_gain,
    find_extremum,
    find_local_minima,
    gain_probe,
    population_inversion,
    scan_detuning,
    scan_phase,
)
from app.export.plot_script import emit_plot_script
from app.export.spectrum_io import (
    SPECTRUM_COLUMNS,
    format_csv,
    spectrum_rows,
    write_document,
    write_spectra,
    write_spectrum,
    write_table,
)
from app.models.domain import SigmaState
from app.utils.phase import float_to_phase_txt

INITIAL_STATE_BUILDERS: dict[str, Callable[[], SigmaState]] = {
    "ground": SigmaState.ground,
    "excited2": lambda: SigmaState.excited(2),
    "excited3": lambda: SigmaState.excited(3),
}


@dataclass
class RunOutcome:
    """Resultado de una corrida para el CLI."""
    command: str
    outputs: list[Path] = field(default_factory=list)
    stdout: str = ""
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _document_text(document: dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


class AppRuntime:
    def __init__(self, config: RunConfig, *, out_q: Optional[Queue] = None):
        self.config = config
        self.out_q: Queue = out_q if out_q is not None else Queue()
        self.outcome = RunOutcome(command=config.command)
        self._thread: Optional[Thread] = None

        self._handlers: dict[str, Callable[[], None]] = {
            "steady": self._cmd_steady,
            "spectrum": self._cmd_spectrum,
            "optimize": self._cmd_optimize,
            "aux-scan": self._cmd_aux_scan,
            "evolve": self._cmd_evolve,
            "chiral": self._cmd_chiral,
            "fluxqubit": self._cmd_fluxqubit,
            "phase-scan": self._cmd_phase_scan,
        }

    # -------------------------
    # API
    # -------------------------
    def emit(self, event: Event) -> None:
        self.out_q.put(event)

    def start(self) -> Thread:
        """Ejecuta el comando en un thread dedicado."""
        if self._thread and self._thread.is_alive():
            return self._thread
        self._thread = Thread(target=self.run, daemon=True)
        self._thread.start()
        return self._thread

    def wait(self, consumer: Callable[[Event], object], poll_seconds: float = 0.05) -> RunOutcome:
        """Consume eventos hasta que el thread termine y la cola quede vacía."""
        thread = self._thread or self.start()
        while thread.is_alive() or not self.out_q.empty():
            try:
                consumer(self.out_q.get(timeout=poll_seconds))
            except Empty:
                continue
        return self.outcome

    def run(self) -> RunOutcome:
        """Ejecución sincrónica (el thread de start() llama a esto)."""
        cfg = self.config
        self.emit(info(EventType.START, f"Comando '{cfg.command}' iniciado"))
        self.emit(info(
            EventType.CONFIG,
            f"kind={cfg.kind.value} g_coupling={cfg.g_coupling:g} g_probe={cfg.g_probe:g} "
            f"g_aux={cfg.g_aux:g} Φ={float_to_phase_txt(cfg.phi)}",
            payload=cfg,
        ))
        try:
            self._handlers[cfg.command]()
        except SimulationError as exc:
            self.outcome.error = exc
            self.emit(error(EventType.EXCEPTION, str(exc)))
        except Exception as exc:
            self.outcome.error = exc
            self.emit(error(EventType.EXCEPTION, f"Error inesperado: {type(exc).__name__}: {exc}"))
        else:
            self.emit(info(EventType.END, f"Comando '{cfg.command}' terminado"))
        return self.outcome

    # -------------------------
    # Internals
    # -------------------------
    def _drives(self):
        cfg = self.config
        return build_config(cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.phi, cfg.detuning)

    def _write_document(self, document: dict) -> None:
        if self.config.out:
            path = write_document(self.config.out, document)
            self.outcome.outputs.append(path)
            self.emit(info(EventType.EXPORT, f"Resultado escrito en {path}"))
        else:
            self.outcome.stdout = _document_text(document)

    def _write_rows(self, columns, rows, params: Optional[dict] = None) -> None:
        cfg = self.config
        if cfg.out:
            path = write_table(cfg.out, columns, rows, cfg.format, params)
            self.outcome.outputs.append(path)
            self.emit(info(EventType.EXPORT, f"{len(rows)} filas escritas en {path}"))
        else:
            self.outcome.stdout = format_csv(columns, rows)

    def _maybe_plot(self, paths: list[Path], labels: Optional[list[str]] = None) -> None:
        if not self.config.plot:
            return
        if not paths or self.config.format == "xlsx":
            self.emit(info(EventType.EXPORT, "plot ignorado: requiere --out con formato csv o json"))
            return
        script = emit_plot_script(paths, labels=labels)
        self.outcome.outputs.append(script)
        self.emit(info(EventType.EXPORT, f"Script de gráfico escrito en {script}"))

    # -------------------------
    # Comandos
    # -------------------------
    def _cmd_steady(self) -> None:
        cfg = self.config
        drives = self._drives()
        state = steady_state(drives, cfg.decays)
        gain = gain_probe(state, drives, cfg.kind)
        self.emit(info(EventType.STEADY, f"Ganancia de la sonda = {gain:+.6e}"))
        terms: dict = {}
        try:
            parts = decompose_gain(state, drives, cfg.decays, cfg.kind)
            terms = {"population_term": parts.population_term, "coherence_term": parts.coherence_term}
        except (ValidationError, NotSteadyStateError) as exc:
            self.emit(warn(EventType.STEADY, f"Descomposición de la ganancia omitida: {exc}"))
        self._write_document({
            "kind": cfg.kind.value,
            "Phi": cfg.phi,
            "detuning": cfg.detuning,
            "state": dict(zip(PACKING, (float(v) for v in pack_state(state)))) | {"s33": state.s33},
            "gain": gain,
            "pop_diff": population_inversion(state, cfg.kind),
            **terms,
            "residual": steady_state_residual(state, drives, cfg.decays),
            "min_eigenvalue": state.min_eigenvalue(),
        })

    def _cmd_spectrum(self) -> None:
        cfg = self.config
        spectrum = scan_detuning(
            cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.phi, cfg.decays,
            cfg.d_min, cfg.d_max, cfg.points,
            workers=cfg.workers, emit=self.emit,
        )
        ext = find_extremum(spectrum)
        where = " (borde del barrido)" if ext.at_boundary else ""
        self.emit(info(EventType.SCAN, f"Mínimo de ganancia {ext.gain:+.6e} en Δ = {ext.detuning:+.4f}{where}"))
        for m in find_local_minima(spectrum):
            self.emit(info(EventType.SCAN, f"Mínimo local en Δ = {m.detuning:+.4f} ({m.gain:+.6e})"))

        if cfg.out:
            path = write_spectrum(spectrum, cfg.format, cfg.out)
            self.outcome.outputs.append(path)
            self.emit(info(EventType.EXPORT, f"Espectro ({len(spectrum)} puntos) escrito en {path}"))
            self._maybe_plot([path])
        else:
            self.outcome.stdout = format_csv(SPECTRUM_COLUMNS, spectrum_rows(spectrum))

    def _cmd_optimize(self) -> None:
        cfg = self.config
        best = optimal_aux_amplitude(
            cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.phi, cfg.detuning, cfg.decays,
            cfg.bracket, workers=cfg.workers, emit=self.emit,
        )
        self._write_document({
            "kind": cfg.kind.value,
            "Phi": cfg.phi,
            "detuning": cfg.detuning,
            "g_star": best.g_star,
            "gain_star": best.gain_star,
            "bracket": list(best.bracket),
            "global_g": best.global_g,
            "global_gain": best.global_gain,
            "is_global": best.is_global,
        })

    def _cmd_aux_scan(self) -> None:
        cfg = self.config
        curve = scan_aux_amplitude(
            cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.phi, cfg.detuning, cfg.decays,
            cfg.g_max, cfg.points, workers=cfg.workers, emit=self.emit,
        )
        low = curve.minimum()
        self.emit(info(EventType.SCAN, f"Mínimo de la grilla en g1 = {low.g_aux:.4f} ({low.gain:+.6e})"))
        self._write_rows(
            ("g_aux", "gain"),
            [(r.g_aux, r.gain) for r in curve.records],
            {"kind": cfg.kind.value, "Phi": cfg.phi, "detuning": cfg.detuning},
        )

    def _cmd_evolve(self) -> None:
        cfg = self.config
        initial = INITIAL_STATE_BUILDERS[cfg.initial]()
        traj = evolve(initial, self._drives(), cfg.decays, cfg.t_final, cfg.rel_tol)
        self.emit(info(
            EventType.EVOLVE,
            f"Evolución hasta t = {cfg.t_final:g}/γ: {traj.accepted_steps} pasos aceptados, "
            f"{traj.rejected_steps} rechazados",
        ))
        rows = [
            (t, *(float(v) for v in pack_state(s)), s.s33)
            for t, s in traj
        ]
        self._write_rows(("t", *PACKING, "s33"), rows)

    def _cmd_chiral(self) -> None:
        cfg = self.config
        report = enantiomer_spectra(
            cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.phi, cfg.decays,
            cfg.d_min, cfg.d_max, cfg.points,
            offset=cfg.offset, workers=cfg.workers, emit=self.emit,
        )
        if not cfg.out:
            rows = [
                (d, gl, gr)
                for d, gl, gr in zip(report.left.detunings, report.left.gains, report.right.gains)
            ]
            self.outcome.stdout = format_csv(("detuning", "gain_left", "gain_right"), rows)
            return

        out = Path(cfg.out)
        paths = write_spectra(
            [
                (spectrum, out.with_name(f"{out.stem}_{side}{out.suffix}"))
                for side, spectrum in (("left", report.left), ("right", report.right))
            ],
            cfg.format,
        )
        self.outcome.outputs.extend(paths)
        self.emit(info(EventType.EXPORT, f"Espectros escritos en {paths[0]} y {paths[1]}"))
        self._maybe_plot(paths, labels=["L", "R"])

    def _cmd_fluxqubit(self) -> None:
        cfg = self.config
        params = cfg.flux_params
        rates = flux_qubit_rates(params)
        seconds = si_steady_time(
            params, cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.phi, cfg.detuning,
            eps=cfg.eps, emit=self.emit,
        )
        self._write_document({
            "rates_si": rates.si.as_dict(),
            "rates_normalized": rates.normalized.as_dict(),
            "gamma_unit": rates.gamma_unit,
            "steady_time_s": seconds,
            "steady_time_over_gamma": seconds * rates.gamma_unit,
        })

    def _cmd_phase_scan(self) -> None:
        cfg = self.config
        scan = scan_phase(
            cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.detuning, cfg.decays, cfg.points,
        )
        self.emit(info(EventType.SCAN, f"Barrido de fase: {len(scan.records)} puntos en [0, 2π)"))
        self._write_rows(
            ("Phi", "gain", "pop_diff"),
            [(r.Phi, r.gain, r.pop_diff) for r in scan.records],
            {"kind": cfg.kind.value, "detuning": cfg.detuning},
        )
