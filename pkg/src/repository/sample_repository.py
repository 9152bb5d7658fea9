"""
Archivo de muestras de preformas:

    m,k
    2,3
    z_1_1,z_1_2,z_2_1,z_2_2
    ...una fila por preforma, aplanada por filas...
"""
import io
import sys
from contextlib import contextmanager

import numpy as np
import pandas as pd

from src.utils.environment import CSV_FLOAT_FORMAT
from src.utils.exceptions import EmptySampleSetError, InvalidSampleSetError
from src.utils.logger import logger


@contextmanager
def open_destination(destination):
    """Ruta, objeto tipo archivo o None/"-" para stdout."""
    if destination is None or destination == "-":
        yield sys.stdout
    elif hasattr(destination, "write"):
        yield destination
    else:
        with open(destination, "w", newline="") as handle:
            yield handle


def sample_columns(m: int, k: int) -> list[str]:
    return [f"z_{i}_{j}" for i in range(1, m + 1) for j in range(1, k)]


class SampleRepository:

    def write(self, preshapes: np.ndarray, destination=None) -> int:
        logger.debug("[Repository] Inicio del metodo write")
        try:
            preshapes = np.asarray(preshapes, dtype=float)
            if preshapes.ndim != 3:
                raise InvalidSampleSetError(f"Se esperaba un arreglo t x m x (k-1): {preshapes.shape}")
            t, m, q = preshapes.shape
            frame = pd.DataFrame(preshapes.reshape(t, m * q), columns=sample_columns(m, q + 1))
            with open_destination(destination) as handle:
                handle.write("m,k\n")
                handle.write(f"{m},{q + 1}\n")
                frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
            logger.info(f"[Repository] {t} preformas escritas (m={m}, k={q + 1})")
            return t
        except Exception as e:
            logger.error(f"Error en escribir las muestras: {e}")
            raise

    def read(self, source) -> np.ndarray:
        """Devuelve un arreglo t x m x (k-1); un archivo sin filas es un conjunto vacio."""
        logger.debug("[Repository] Inicio del metodo read")
        try:
            if hasattr(source, "read"):
                text = source.read()
            else:
                with open(source) as handle:
                    text = handle.read()
            if not text.strip():
                raise EmptySampleSetError("El archivo de muestras esta vacio")
            lines = text.splitlines()
            try:
                header = pd.read_csv(io.StringIO("\n".join(lines[:2])))
                m, k = int(header["m"].iloc[0]), int(header["k"].iloc[0])
            except (KeyError, ValueError, IndexError, pd.errors.ParserError) as e:
                raise InvalidSampleSetError(f"Cabecera m,k invalida: {e}") from e
            if m < 1 or k < 2:
                raise InvalidSampleSetError(f"Dimensiones invalidas en la cabecera: m={m}, k={k}")

            try:
                frame = pd.read_csv(io.StringIO("\n".join(lines[2:])), float_precision="round_trip")
            except pd.errors.EmptyDataError:
                raise EmptySampleSetError("El archivo de muestras no tiene filas")
            if frame.empty:
                raise EmptySampleSetError("El archivo de muestras no tiene filas")
            expected = sample_columns(m, k)
            if list(frame.columns) != expected:
                raise InvalidSampleSetError(f"Columnas inesperadas: {list(frame.columns)} (se esperaba {expected})")
            values = frame.to_numpy(dtype=float)
            if not np.all(np.isfinite(values)):
                raise InvalidSampleSetError("El archivo de muestras contiene valores no finitos")
            logger.info(f"[Repository] {len(frame)} preformas leidas (m={m}, k={k})")
            return values.reshape(len(frame), m, k - 1)
        except Exception as e:
            logger.error(f"Error en leer las muestras: {e}")
            raise
