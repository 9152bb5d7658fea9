"""
Datos de las figuras como tablas de pandas: dispersion en el disco,
histograma de radios, celdas del simplex de angulos y mapa de la semiesfera.
"""
import math

import numpy as np
import pandas as pd

from src.repository.models.uniformity_model import TestReport
from src.service.conversions import (
    disk_to_sides_array,
    hemisphere_cartesian_array,
    hemisphere_to_disk_array,
    sides_to_disk_array,
)
from src.service.sampling import (
    angle_bin_counts,
    angle_bin_vertices,
    angle_density_array,
    classify_batch,
    sample_sides,
    sides_to_angles_array,
)
from src.service.uniformity import chi_square_test
from src.utils.exceptions import InvalidArgumentError

PLOT_KINDS = ("disk-scatter", "radius-histogram", "angle-bins", "hemisphere-map")
MAX_RADIUS = 0.5


def radius_density(r):
    """Sombra de la medida uniforme de la semiesfera sobre el radio: 4r / sqrt(1 - 4r^2)."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(r < MAX_RADIUS, 4.0 * r / np.sqrt(1.0 - 4.0 * r * r), np.inf)


def radius_cdf(r):
    r = np.clip(np.asarray(r, dtype=float), 0.0, MAX_RADIUS)
    return 1.0 - np.sqrt(1.0 - 4.0 * r * r)


def disk_scatter(sides: np.ndarray) -> pd.DataFrame:
    disk = sides_to_disk_array(sides)
    return pd.DataFrame({
        "x": disk[:, 0] * np.cos(disk[:, 1]),
        "y": disk[:, 0] * np.sin(disk[:, 1]),
        "class": classify_batch(sides),
    })


def radius_histogram(sides: np.ndarray, bins: int = 50) -> tuple[pd.DataFrame, TestReport]:
    """Conteos de r en bins iguales de [0, 1/2], conteo esperado y la curva teorica en el centro."""
    if bins < 1:
        raise InvalidArgumentError(f"bins debe ser >= 1: {bins}")
    radii = sides_to_disk_array(sides)[:, 0]
    edges = np.linspace(0.0, MAX_RADIUS, bins + 1)
    counts, _ = np.histogram(np.clip(radii, 0.0, MAX_RADIUS), bins=edges)
    probabilities = np.diff(radius_cdf(edges))
    centers = 0.5 * (edges[:-1] + edges[1:])
    frame = pd.DataFrame({
        "bin_low": edges[:-1],
        "bin_high": edges[1:],
        "count": counts,
        "expected": probabilities * radii.size,
        "density": radius_density(centers),
    })
    return frame, chi_square_test(counts, probabilities, name="radius_histogram")


def angle_bin_probabilities(divisions: int, order: int = 12) -> np.ndarray:
    """
    Probabilidad de cada celda bajo la densidad de angulos, con una regla de
    Gauss-Legendre colapsada sobre cada triangulo (sin nodos en los vertices).
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    # Duffy: (s, t) en [0,1]^2 -> (s, s t) con jacobiano s
    s, t = np.meshgrid(u, u, indexing="ij")
    ws = np.outer(w, w) * s
    probabilities = []
    for cell in angle_bin_vertices(divisions):
        p0, p1, p2 = _corner_first(cell)
        e1, e2 = p1 - p0, p2 - p0
        area = abs(e1[0] * e2[1] - e1[1] * e2[0])
        points = p0 + s[..., None] * e1 + (s * t)[..., None] * (e2 - e1)
        values = angle_density_array(points[..., 0], points[..., 1])
        probabilities.append(area * float(np.sum(ws * values)))
    probabilities = np.array(probabilities)
    return probabilities / probabilities.sum()


def _corner_first(cell: np.ndarray) -> np.ndarray:
    """Rota los vertices para que un vertice del simplex (donde la densidad diverge) quede primero."""
    gamma = 1.0 - cell.sum(axis=1)
    corner = np.isclose(np.max(np.column_stack([cell, gamma]), axis=1), 1.0)
    if not corner.any():
        return cell
    return np.roll(cell, -int(np.argmax(corner)), axis=0)


def angle_bins(sides: np.ndarray, divisions: int = 10) -> tuple[pd.DataFrame, TestReport]:
    """Conteos por celda del simplex de angulos, densidad teorica en el baricentro y probabilidad de la celda."""
    angles = sides_to_angles_array(sides)
    counts = angle_bin_counts(angles, divisions)
    cells = angle_bin_vertices(divisions)
    centroids = np.array([cell.mean(axis=0) for cell in cells])
    up_cells = divisions * (divisions + 1) // 2
    probabilities = angle_bin_probabilities(divisions)
    frame = pd.DataFrame({
        "bin": np.arange(len(cells)),
        "orientation": ["up"] * up_cells + ["down"] * (len(cells) - up_cells),
        "alpha": centroids[:, 0],
        "beta": centroids[:, 1],
        "gamma": 1.0 - centroids[:, 0] - centroids[:, 1],
        "count": counts,
        "density": angle_density_array(centroids[:, 0], centroids[:, 1]),
        "expected": probabilities * angles.shape[0],
        "uniform_expected": np.full(len(cells), angles.shape[0] / len(cells)),
    })
    return frame, chi_square_test(counts, probabilities, name="angle_bins")


def hemisphere_map(divisions: int = 12) -> pd.DataFrame:
    """Reticula de (latitud, longitud) y su imagen en el simplex de angulos."""
    if divisions < 1:
        raise InvalidArgumentError(f"divisions debe ser >= 1: {divisions}")
    latitudes = np.linspace(0.0, math.pi / 2.0, divisions + 1)
    longitudes = np.linspace(0.0, 2.0 * math.pi, 4 * divisions, endpoint=False)
    grid = np.array([(lat, lon) for lat in latitudes for lon in longitudes])
    sides = disk_to_sides_array(hemisphere_to_disk_array(grid))
    angles = sides_to_angles_array(np.clip(sides, 0.0, None))
    xyz = hemisphere_cartesian_array(grid)
    return pd.DataFrame({
        "latitude": grid[:, 0],
        "longitude": grid[:, 1],
        "x": xyz[:, 0],
        "y": xyz[:, 1],
        "z": xyz[:, 2],
        "alpha": angles[:, 0],
        "beta": angles[:, 1],
        "gamma": angles[:, 2],
    })


def plot_data(kind: str, model: str = "gaussian", n_samples: int = 10_000, seed=None,
              bins: int = 50, divisions: int = 10, workers: int | None = None, m: int = 2):
    """Devuelve (tabla, reporte o None) para el tipo de figura pedido."""
    if kind not in PLOT_KINDS:
        raise InvalidArgumentError(f"Tipo de datos de figura desconocido: {kind}")
    if kind == "hemisphere-map":
        return hemisphere_map(divisions), None
    sides = sample_sides(model, n_samples, seed, workers, m=m)
    if kind == "disk-scatter":
        return disk_scatter(sides), None
    if kind == "radius-histogram":
        return radius_histogram(sides, bins)
    return angle_bins(sides, divisions)
