import io
import json
from typing import Any, Mapping

import numpy as np
import pandas as pd

from src.repository.sample_repository import open_destination
from src.utils.environment import CSV_FLOAT_FORMAT
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import logger

FORMATS = ("structured", "csv", "json")


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return CSV_FLOAT_FORMAT % float(value)
    return str(value)


def flatten_record(record: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    """Aplana secuencias y diccionarios anidados con sufijos: S -> S_0, S_1, S_2."""
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten_record(value, prefix=f"{name}_"))
        elif isinstance(value, (list, tuple, np.ndarray)):
            flat.update(flatten_record({str(i): v for i, v in enumerate(value)}, prefix=f"{name}_"))
        else:
            flat[name] = value
    return flat


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _parse_scalar(text: str) -> Any:
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


class RecordRepository:
    """
    Salida de la CLI. Un registro es un diccionario plano (o anidado) que se
    emite como lineas key=value, como CSV de una fila o como JSON. Las tablas
    siempre van como CSV salvo en formato json.
    """

    def __init__(self, output=None, fmt: str = "structured") -> None:
        if fmt not in FORMATS:
            raise InvalidArgumentError(f"Formato desconocido: {fmt}")
        self.output = output
        self.fmt = fmt

    def render_record(self, record: Mapping[str, Any]) -> str:
        if self.fmt == "json":
            return json.dumps(_jsonable(record), indent=2) + "\n"
        flat = flatten_record(record)
        if self.fmt == "csv":
            header = ",".join(flat)
            row = ",".join(format_value(v) for v in flat.values())
            return f"{header}\n{row}\n"
        return "".join(f"{key}={format_value(value)}\n" for key, value in flat.items())

    def write_record(self, record: Mapping[str, Any]) -> None:
        logger.debug("[Repository] Inicio del metodo write_record")
        try:
            with open_destination(self.output) as handle:
                handle.write(self.render_record(record))
        except Exception as e:
            logger.error(f"Error en escribir el registro: {e}")
            raise

    def write_records(self, records: list[Mapping[str, Any]]) -> None:
        """Varios registros: lista JSON, CSV con una fila por registro o bloques key=value."""
        logger.debug("[Repository] Inicio del metodo write_records")
        try:
            with open_destination(self.output) as handle:
                if self.fmt == "json":
                    handle.write(json.dumps(_jsonable(list(records)), indent=2) + "\n")
                elif self.fmt == "csv":
                    frame = pd.DataFrame([flatten_record(r) for r in records])
                    frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
                else:
                    handle.write("\n".join(self.render_record(r) for r in records))
        except Exception as e:
            logger.error(f"Error en escribir los registros: {e}")
            raise

    def write_table(self, frame: pd.DataFrame) -> None:
        logger.debug(f"[Repository] Inicio del metodo write_table ({len(frame)} filas)")
        try:
            with open_destination(self.output) as handle:
                if self.fmt == "json":
                    handle.write(json.dumps(_jsonable(frame.to_dict(orient="records")), indent=2) + "\n")
                else:
                    frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        except Exception as e:
            logger.error(f"Error en escribir la tabla: {e}")
            raise

    def read_record(self, text: str) -> dict[str, Any]:
        """Inversa de render_record para el formato de este repositorio (JSON queda anidado)."""
        if self.fmt == "json":
            return json.loads(text)
        if self.fmt == "csv":
            frame = pd.read_csv(io.StringIO(text), float_precision="round_trip", keep_default_na=False)
            row = frame.iloc[0].to_dict()
            return {key: _parse_scalar(str(value)) if isinstance(value, str) else value for key, value in row.items()}
        record = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, separator, value = line.partition("=")
            if not separator:
                raise InvalidArgumentError(f"Linea sin key=value: {line}")
            record[key] = _parse_scalar(value)
        return record

    def read_table(self, text: str) -> pd.DataFrame:
        if self.fmt == "json":
            return pd.DataFrame(json.loads(text))
        return pd.read_csv(io.StringIO(text), float_precision="round_trip")
