"""
Marcos de referencia: matrices de Helmert, vistas de vertices y aristas, y la
matriz de forma 2x2.
"""
import math
from functools import lru_cache

import numpy as np

from src.repository.models.frame_model import EdgeMatrix, HelmertFrame, ShapeMatrix, VertexMatrix
from src.repository.models.uniformity_model import PreShape
from src.utils.exceptions import DegenerateInputError, InvalidArgumentError

# E = T D: columna j de E es el vertice j menos el anterior (ciclico)
CYCLIC_DIFFERENCE = np.array([
    [1.0, -1.0, 0.0],
    [0.0, 1.0, -1.0],
    [-1.0, 0.0, 1.0],
])

# Mv = Me R con R = rot(-pi/6) / sqrt(3)
VERTEX_FROM_EDGE_VIEW = np.array([
    [0.5, math.sqrt(3.0) / 6.0],
    [-math.sqrt(3.0) / 6.0, 0.5],
])


@lru_cache(maxsize=64)
def _helmert_matrix(n: int) -> np.ndarray:
    matrix = np.zeros((n - 1, n))
    for j in range(1, n):
        matrix[j - 1, :j] = 1.0
        matrix[j - 1, j] = -float(j)
        matrix[j - 1] /= math.sqrt(j * (j + 1))
    matrix.flags.writeable = False
    return matrix


def helmert(n: int) -> HelmertFrame:
    """
    Matriz de Helmert generalizada de tamano (n-1) x n.

    La fila j tiene j unos, luego -j, luego ceros, escalada por 1/sqrt(j(j+1)).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidArgumentError(f"La matriz de Helmert requiere n >= 2: {n}")
    return HelmertFrame(n=int(n), matrix=_helmert_matrix(int(n)))


def helmert_identity_residuals(n: int) -> tuple[float, float]:
    """Residuos max |DD^T - I| y max |D^T D - (I - J/n)|."""
    delta = helmert(n).matrix
    row_residual = np.abs(delta @ delta.T - np.eye(n - 1)).max()
    column_residual = np.abs(delta.T @ delta - (np.eye(n) - np.ones((n, n)) / n)).max()
    return float(row_residual), float(column_residual)


def delta3() -> np.ndarray:
    return _helmert_matrix(3)


def center_vertices(vertices) -> VertexMatrix:
    raw = np.asarray(vertices, dtype=float)
    if raw.shape != (2, 3):
        raise InvalidArgumentError(f"Se esperaba una matriz de vertices 2x3: {raw.shape}")
    return VertexMatrix(raw - raw.mean(axis=1, keepdims=True))


def vertices_to_edges(vertex_matrix: VertexMatrix) -> EdgeMatrix:
    return EdgeMatrix(vertex_matrix.entries @ CYCLIC_DIFFERENCE)


def edges_to_vertices(edge_matrix: EdgeMatrix) -> VertexMatrix:
    # D^T es la pseudoinversa de D escalada por 3 sobre el subespacio de suma cero
    return VertexMatrix(edge_matrix.entries @ CYCLIC_DIFFERENCE.T / 3.0)


def _unit_shape(product: np.ndarray) -> ShapeMatrix:
    norm = float(np.sqrt(np.sum(product ** 2)))
    if norm == 0.0:
        raise DegenerateInputError("Triangulo de tamano cero: todos los vertices coinciden")
    return ShapeMatrix(product / norm)


def vertex_view(vertex_matrix: VertexMatrix) -> np.ndarray:
    """Mv = T Delta^T sin normalizar."""
    return vertex_matrix.entries @ delta3().T


def edge_view(edge_matrix: EdgeMatrix) -> np.ndarray:
    """Me = E Delta^T sin normalizar."""
    return edge_matrix.entries @ delta3().T


def shape_from_vertices(vertex_matrix: VertexMatrix) -> ShapeMatrix:
    return _unit_shape(vertex_view(vertex_matrix))


def shape_from_edges(edge_matrix: EdgeMatrix) -> ShapeMatrix:
    """Vista de aristas, la usada por defecto en todo el paquete."""
    return _unit_shape(edge_view(edge_matrix))


def shape_from_triangle(vertices) -> ShapeMatrix:
    """Atajo: vertices en bruto (2x3) -> matriz de forma en la vista de aristas."""
    return shape_from_edges(vertices_to_edges(center_vertices(vertices)))


def preshape_from_configuration(configuration) -> PreShape:
    """Z = X Delta_k^T / ||X Delta_k^T||_F para k puntos en R^m (columnas de X)."""
    x = np.asarray(configuration, dtype=float)
    if x.ndim != 2 or x.shape[1] < 2:
        raise InvalidArgumentError(f"La configuracion debe ser m x k con k >= 2: {x.shape}")
    z = x @ helmert(x.shape[1]).matrix.T
    norm = float(np.sqrt(np.sum(z ** 2)))
    if norm == 0.0:
        raise DegenerateInputError("Configuracion degenerada: todos los puntos coinciden")
    return PreShape(z / norm)
