# main.py
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from app.core.app_runtime import AppRuntime
from app.core.config_loader import COMMANDS, FORMATS, INITIAL_STATES, RUN_DEFAULTS, ConfigLoader
from app.core.errors import SimulationError
from app.core.events import EventType, error
from app.core.model import curve_presets
from app.ui.console_logger import ConsoleLogger
from app.utils.app_paths import resolve_config_path
from app.version import APP_DESCRIPTION, APP_NAME, VERSION_ACTUAL

FLAG_HELP = {
    "kind": "Configuración: a (sonda 1↔2) o b (sonda 2↔3)",
    "g_coupling": "Amplitud del campo de acoplamiento (γ)",
    "g_probe": "Amplitud de la sonda (γ)",
    "g_aux": "Amplitud del campo auxiliar g1 (γ)",
    "phi": "Fase de lazo Φ en radianes; acepta 'pi/2', '3pi/2', ...",
    "detuning": "Desintonía de la sonda (γ) para comandos de un solo punto",
    "d_min": "Desintonía mínima del barrido (γ)",
    "d_max": "Desintonía máxima del barrido (γ)",
    "points": "Cantidad de puntos del barrido",
    "offset": "Diferencia de fase entre enantiómeros (default: pi)",
    "g_max": "g1 máximo del barrido en g1 (γ)",
    "bracket_lo": "Extremo inferior del intervalo de búsqueda de g1",
    "bracket_hi": "Extremo superior del intervalo de búsqueda de g1",
    "t_final": "Tiempo final de la evolución (1/γ)",
    "rel_tol": "Tolerancia relativa del integrador",
    "initial": f"Estado inicial de la evolución ({', '.join(INITIAL_STATES)})",
    "gamma_ref": "Tasa de referencia del qubit de flujo (s⁻¹)",
    "t_ref": "Módulo de referencia asociado a gamma_ref",
    "eps": "Umbral (norma máx.) para declarar el estacionario",
    "out": "Archivo de salida (si falta, se escribe en stdout)",
    "format": f"Formato de salida ({', '.join(FORMATS)})",
    "workers": "Threads para los barridos (default: 1)",
    "preset": f"Parámetros de una curva de ganancia ({', '.join(curve_presets())})",
}


def _add_run_flags(parser: argparse.ArgumentParser, unset: object) -> None:
    """Un flag por clave de RunConfig; sin valor por defecto para no pisar el archivo."""
    for key in RUN_DEFAULTS:
        flag = "--" + key.replace("_", "-")
        if key == "plot":
            parser.add_argument(flag, action="store_const", const="true", default=unset,
                                help="Escribe además un script de matplotlib junto a la salida")
            continue
        default = RUN_DEFAULTS[key]
        default_txt = getattr(default, "value", default)
        parser.add_argument(
            flag,
            dest=key,
            type=str,
            default=unset,
            metavar=key.upper(),
            help=f"{FLAG_HELP.get(key, key)} [default: {default_txt}]",
        )


def _common_flags(unset: object) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=str,
        default=unset,
        help="Archivo key=value (o nombre de un ejemplo en data/configs); los flags tienen prioridad",
    )
    common.add_argument("--verbose", action="store_true", default=unset or False,
                        help="Muestra también los eventos DEBUG")
    _add_run_flags(common, unset)
    return common


def build_parser() -> argparse.ArgumentParser:
    # En los subcomandos los flags ausentes no se asignan (SUPPRESS), así no
    # pisan lo que se haya dado antes del subcomando.
    parser = argparse.ArgumentParser(prog=APP_NAME, description=APP_DESCRIPTION, parents=[_common_flags(None)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION_ACTUAL}")
    sub = parser.add_subparsers(dest="command", metavar="COMANDO")
    for command in COMMANDS:
        sub.add_parser(command, parents=[_common_flags(argparse.SUPPRESS)], help=f"Ejecuta '{command}'")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = ConsoleLogger(verbose=args.verbose)

    overrides = {key: getattr(args, key, None) for key in RUN_DEFAULTS}
    overrides["command"] = args.command
    try:
        if args.config:
            config = ConfigLoader.load(resolve_config_path(args.config), overrides)
        else:
            if not args.command:
                parser.error("se requiere un COMANDO o --config con 'command = ...'")
            config = ConfigLoader.parse("", overrides)
    except SimulationError as exc:
        logger.handle(error(EventType.EXCEPTION, str(exc)))
        return 1

    runtime = AppRuntime(config)
    runtime.start()
    outcome = runtime.wait(logger.handle)

    if outcome.stdout:
        sys.stdout.write(outcome.stdout)
        sys.stdout.flush()
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
