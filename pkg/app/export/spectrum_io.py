# app/export/spectrum_io.py
"""
Exportación/importación de tablas de resultados (espectros, barridos, trayectorias).

Formatos:
- csv: una fila de encabezado + una fila por registro.
- json: {"params": {...}, "records": [{columna: valor}, ...]}
- xlsx: hoja con tabla de Excel (openpyxl), mismas columnas.

Reglas:
- Los floats se escriben con 17 cifras significativas (vuelta exacta al leer).
- Escritura atómica: archivo temporal en el mismo directorio y rename al final,
  así un error nunca deja una salida parcial.
- Varias salidas de una misma corrida se escriben todas o ninguna.
- Permisos finales: 0o666 menos la umask del proceso.
- csv/json son byte-idénticos para entradas idénticas.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from openpyxl import Workbook, load_workbook
from openpyxl.utils import get_column_letter
from openpyxl.worksheet.table import Table, TableStyleInfo

from app.core.errors import OutputError, ValidationError
from app.models.domain import ConfigurationKind
from app.models.results import GainRecord, GainSpectrum

SPECTRUM_COLUMNS = ("detuning", "gain", "pop_diff", "s11", "s22", "s33")

SHEET_NAME = "Resultados"
TABLE_NAME = "T_Resultados"


def format_float(value: float) -> str:
    return f"{float(value):.16e}"


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value  # Enum
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


# -------------------------
# Escritura atómica
# -------------------------

def _default_file_mode() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


# NamedTemporaryFile crea 0600; las salidas finales llevan los permisos habituales
FILE_MODE = _default_file_mode()

WriteJob = tuple[Path, Callable[[Any], Any], bool]


def _stage(path: Path, write: Callable[[Any], Any], binary: bool) -> str:
    """Escribe en un temporal junto a path y devuelve su nombre (lo borra si falla)."""
    parent = path.parent if str(path.parent) else Path(".")
    tmp_name: Optional[str] = None
    try:
        parent.mkdir(parents=True, exist_ok=True)
        mode = "wb" if binary else "w"
        kwargs = {} if binary else {"encoding": "utf-8", "newline": ""}
        with tempfile.NamedTemporaryFile(
            mode, dir=parent, prefix=f".{path.name}.", suffix=".tmp", delete=False, **kwargs
        ) as handle:
            tmp_name = handle.name
            write(handle)
        os.chmod(tmp_name, FILE_MODE)
        return tmp_name
    except BaseException:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def atomic_write_many(jobs: Sequence[WriteJob]) -> list[Path]:
    """
    Escribe varios archivos como una unidad: primero todos los temporales,
    después los renombres. Si algo falla no queda ninguna salida nueva.
    """
    staged: list[tuple[str, Path, bool]] = []
    committed: list[tuple[Path, bool]] = []
    current: Optional[Path] = None
    try:
        for path, write, binary in jobs:
            current = Path(path)
            staged.append((_stage(current, write, binary), current, current.exists()))
        for tmp_name, path, existed in staged:
            current = path
            os.replace(tmp_name, path)
            committed.append((path, existed))
    except BaseException as exc:
        for tmp_name, _, _ in staged:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
        for path, existed in committed:
            if not existed:
                path.unlink(missing_ok=True)
        if isinstance(exc, OSError) and not isinstance(exc, OutputError):
            raise OutputError(
                f"No se pudo escribir el archivo ({exc.strerror or exc})", path=str(current)
            ) from exc
        raise
    return [path for _, path, _ in staged]


def atomic_write(path: Path, write: Callable[[Any], Any], *, binary: bool = False) -> Path:
    """Ejecuta write(handle) sobre un temporal y lo renombra a path."""
    return atomic_write_many([(Path(path), write, binary)])[0]


def format_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def format_json(columns: Sequence[str], rows: Iterable[Sequence[Any]], params: Optional[Mapping] = None) -> str:
    document = {
        "params": _jsonable(dict(params or {})),
        "records": [dict(zip(columns, (_jsonable(v) for v in row))) for row in rows],
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _write_xlsx(handle: Any, columns: Sequence[str], rows: list[Sequence[Any]]) -> None:
    wb = Workbook()
    ws = wb.active
    ws.title = SHEET_NAME
    ws.append(list(columns))
    for row in rows:
        ws.append([_jsonable(v) for v in row])

    if rows:
        ref = f"A1:{get_column_letter(len(columns))}{len(rows) + 1}"
        table = Table(displayName=TABLE_NAME, ref=ref)
        table.tableStyleInfo = TableStyleInfo(
            name="TableStyleMedium9",
            showRowStripes=True,
            showColumnStripes=False,
        )
        ws.add_table(table)
        for col_idx in range(1, len(columns) + 1):
            for r in range(2, len(rows) + 2):
                ws.cell(row=r, column=col_idx).number_format = "0.000000000E+00"

    wb.save(handle)


def _table_job(
    path: Path | str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: str,
    params: Optional[Mapping] = None,
) -> WriteJob:
    rows = list(rows)
    fmt = fmt.lower()
    if fmt == "csv":
        text = format_csv(columns, rows)
        return Path(path), lambda h: h.write(text), False
    if fmt == "json":
        text = format_json(columns, rows, params)
        return Path(path), lambda h: h.write(text), False
    if fmt == "xlsx":
        return Path(path), lambda h: _write_xlsx(h, columns, rows), True
    raise ValidationError(f"Formato de salida desconocido: {fmt!r} (csv, json, xlsx)")


def write_table(
    path: Path | str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: str = "csv",
    params: Optional[Mapping] = None,
) -> Path:
    """
    Escribe una tabla genérica en el formato pedido.

    Raises:
        ValidationError: formato desconocido.
        OutputError: fallo de I/O (con la ruta).
    """
    return atomic_write_many([_table_job(path, columns, rows, fmt, params)])[0]


def write_document(path: Path | str, document: Mapping[str, Any]) -> Path:
    """Resultado escalar (steady, optimize, fluxqubit) como JSON atómico."""
    text = json.dumps(_jsonable(dict(document)), indent=2, ensure_ascii=False) + "\n"
    return atomic_write(Path(path), lambda h: h.write(text))


# -------------------------
# Espectros
# -------------------------

def spectrum_rows(spectrum: GainSpectrum) -> list[tuple[float, ...]]:
    return [
        (r.detuning, r.gain, r.pop_diff, r.s11, r.s22, r.s33)
        for r in spectrum.records
    ]


def write_spectrum(spectrum: GainSpectrum, fmt: str, path: Path | str) -> Path:
    """Columnas exactas: detuning,gain,pop_diff,s11,s22,s33."""
    return write_table(path, SPECTRUM_COLUMNS, spectrum_rows(spectrum), fmt, spectrum.params)


def write_spectra(items: Sequence[tuple[GainSpectrum, Path | str]], fmt: str) -> list[Path]:
    """Varios espectros de una misma corrida: se escriben todos o ninguno."""
    jobs = [
        _table_job(path, SPECTRUM_COLUMNS, spectrum_rows(spectrum), fmt, spectrum.params)
        for spectrum, path in items
    ]
    return atomic_write_many(jobs)


def read_spectrum(
    path: Path | str,
    *,
    kind: ConfigurationKind = ConfigurationKind.A,
    Phi: float = 0.0,
) -> GainSpectrum:
    """
    Lee un espectro csv/json/xlsx escrito por write_spectrum.

    El csv no lleva parámetros: kind y Phi se toman de los argumentos.
    El json los toma de "params" si están.

    Raises:
        ValidationError: columnas inesperadas o formato desconocido.
        OutputError: archivo inexistente o ilegible.
    """
    path = Path(path)
    if not path.exists():
        raise OutputError("Archivo de espectro no encontrado", path=str(path))

    suffix = path.suffix.lower()
    params: dict = {}
    try:
        if suffix == ".csv":
            with open(path, "r", encoding="utf-8", newline="") as f:
                reader = csv.reader(f)
                header = next(reader, None)
                raw_rows = [row for row in reader if row]
        elif suffix == ".json":
            with open(path, "r", encoding="utf-8") as f:
                document = json.load(f)
            params = document.get("params", {})
            records = document.get("records", [])
            header = list(records[0].keys()) if records else list(SPECTRUM_COLUMNS)
            raw_rows = [[rec[c] for c in header] for rec in records]
        elif suffix == ".xlsx":
            wb = load_workbook(path, read_only=True)
            ws = wb[SHEET_NAME] if SHEET_NAME in wb.sheetnames else wb.active
            all_rows = list(ws.iter_rows(values_only=True))
            wb.close()
            header = list(all_rows[0]) if all_rows else None
            raw_rows = [list(r) for r in all_rows[1:] if any(v is not None for v in r)]
        else:
            raise ValidationError(f"Extensión no soportada: {suffix!r}")
    except OSError as exc:
        raise OutputError(f"No se pudo leer el archivo ({exc})", path=str(path)) from exc

    if header is None or tuple(header) != SPECTRUM_COLUMNS:
        raise ValidationError(f"Columnas inesperadas en {path}: {header!r}")

    records = tuple(GainRecord(*(float(v) for v in row)) for row in raw_rows)
    if "kind" in params:
        kind = ConfigurationKind.parse(params["kind"])
    if "Phi" in params:
        Phi = float(params["Phi"])
    return GainSpectrum(kind=ConfigurationKind(kind), Phi=float(Phi), records=records, params=params)
