from dataclasses import dataclass

import numpy as np

from src.utils.environment import VALIDATION_TOLERANCE
from src.utils.exceptions import (
    DegenerateInputError,
    InvalidArgumentError,
    InvalidEdgeMatrixError,
    InvalidShapeMatrixError,
)


def frozen_array(values, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Copia de solo lectura en float64, con validacion opcional de la forma."""
    array = np.array(values, dtype=float)
    if shape is not None and array.shape != shape:
        raise InvalidArgumentError(f"Se esperaba una matriz {shape}, se recibio {array.shape}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class VertexMatrix:
    """Matriz 2x3 cuyas columnas son los vertices del triangulo."""
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", frozen_array(self.entries, (2, 3)))

    @property
    def is_centered(self) -> bool:
        return bool(np.all(np.abs(self.entries.sum(axis=1)) <= VALIDATION_TOLERANCE))


@dataclass(frozen=True, eq=False)
class EdgeMatrix:
    """Matriz 2x3 cuyas columnas son las aristas; un triangulo cerrado suma cero."""
    entries: np.ndarray

    def __post_init__(self):
        entries = frozen_array(self.entries, (2, 3))
        scale = max(1.0, float(np.abs(entries).max()))
        if np.any(np.abs(entries.sum(axis=1)) > VALIDATION_TOLERANCE * scale):
            raise InvalidEdgeMatrixError(f"Las aristas no cierran el triangulo: suma={entries.sum(axis=1)}")
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True, eq=False)
class ShapeMatrix:
    """Matriz 2x2 M con norma de Frobenius 1."""
    entries: np.ndarray

    def __post_init__(self):
        entries = frozen_array(self.entries, (2, 2))
        norm = float(np.sqrt(np.sum(entries ** 2)))
        if abs(norm - 1.0) > VALIDATION_TOLERANCE:
            raise InvalidShapeMatrixError(f"La matriz de forma debe tener norma 1: {norm}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def normalized(cls, values) -> "ShapeMatrix":
        array = np.asarray(values, dtype=float)
        norm = float(np.sqrt(np.sum(array ** 2)))
        if norm == 0.0:
            raise DegenerateInputError("La matriz nula no representa ninguna forma")
        return cls(array / norm)

    @property
    def determinant(self) -> float:
        m = self.entries
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


@dataclass(frozen=True, eq=False)
class HelmertFrame:
    """Matriz de Helmert (n-1) x n: filas ortonormales perpendiculares a (1, ..., 1)."""
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", frozen_array(self.matrix, (self.n - 1, self.n)))
