"""
Conversiones entre las representaciones de una forma triangular.

Representaciones (y su arreglo numpy en los kernels vectorizados):

    svd         (..., 3)    sigma1, sigma2, theta
    sides       (..., 3)    a2, b2, c2
    hemisphere  (..., 2)    latitud, longitud
    disk        (..., 2)    r, phi
    matrix      (..., 2, 2) M = Sigma V^T (U descartada)

Las funciones publicas sobre dataclasses envuelven los kernels `*_array`,
que son los que usan el muestreo y la verificacion de ciclos.
"""
import itertools
import math

import numpy as np

from src.repository.models.frame_model import ShapeMatrix
from src.repository.models.shape_model import (
    DiskPoint,
    HemispherePoint,
    RoundtripReport,
    SquaredSides,
    SvdShape,
    UnitQuaternion,
)
from src.service.core import delta3
from src.utils.exceptions import InvalidArgumentError, NotATriangleError
from src.utils.environment import VALIDATION_TOLERANCE

TWO_PI = 2.0 * math.pi
SQRT3 = math.sqrt(3.0)
SQRT12 = math.sqrt(12.0)
SQRT48 = math.sqrt(48.0)
SVD_DEGENERACY = 1e-9

# Delta~ = (disco) <- (a2, b2, c2): filas (1/2, 1/2, -1) y (sqrt3/2, -sqrt3/2, 0)
SIDES_TO_DISK = np.array([
    [0.5, 0.5, -1.0],
    [SQRT3 / 2.0, -SQRT3 / 2.0, 0.0],
])

REPRESENTATIONS = ("svd", "sides", "hemisphere", "disk", "matrix")


def _as_matrix(M) -> np.ndarray:
    if isinstance(M, ShapeMatrix):
        return M.entries
    array = np.asarray(M, dtype=float)
    if array.shape[-2:] != (2, 2):
        raise InvalidArgumentError(f"Se esperaba una matriz 2x2: {array.shape}")
    return array


# ----------------------------------------------------------------------------
# Kernels vectorizados
# ----------------------------------------------------------------------------

def svd_factors_array(matrices) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    SVD cerrada de matrices 2x2: devuelve (U, sigma, theta) con M = U diag(sigma) V^T
    y V = rot(theta), theta en [0, pi).

    sigma1 +/- sigma2 salen de dos hipotenusas (identidad de Givens/Jacobi);
    theta sale de M^T M. Con sigma1 - sigma2 < 1e-9 se fija theta = 0.
    """
    m = _as_matrix(matrices)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    q = np.hypot(0.5 * (a + d), 0.5 * (c - b))
    p = np.hypot(0.5 * (a - d), 0.5 * (c + b))
    sigma1 = q + p
    sigma2 = np.abs(q - p)

    gram_half_diff = 0.5 * (a * a + c * c - b * b - d * d)
    gram_off = a * b + c * d
    theta = 0.5 * np.arctan2(gram_off, gram_half_diff)
    theta = np.where(sigma1 - sigma2 < SVD_DEGENERACY, 0.0, np.mod(theta, math.pi))
    theta = np.where(theta >= math.pi, 0.0, theta)

    cos_t, sin_t = np.cos(theta), np.sin(theta)
    safe_sigma1 = np.where(sigma1 > 0.0, sigma1, 1.0)
    u1x = (a * cos_t + b * sin_t) / safe_sigma1
    u1y = (c * cos_t + d * sin_t) / safe_sigma1
    orientation = np.where(a * d - b * c < 0.0, -1.0, 1.0)
    u = np.stack([
        np.stack([u1x, -orientation * u1y], axis=-1),
        np.stack([u1y, orientation * u1x], axis=-1),
    ], axis=-2)
    return u, np.stack([sigma1, sigma2], axis=-1), theta


def svd_array(matrices) -> np.ndarray:
    _, sigma, theta = svd_factors_array(matrices)
    return np.concatenate([sigma, theta[..., None]], axis=-1)


def svd_to_hemisphere_array(svd: np.ndarray) -> np.ndarray:
    # atan2(sin, cos) con sin = 2 s1 s2 y cos = s1^2 - s2^2; equivale a asin(2 s1 s2)
    s1, s2, theta = svd[..., 0], svd[..., 1], svd[..., 2]
    latitude = np.arctan2(2.0 * s1 * s2, (s1 - s2) * (s1 + s2))
    latitude = np.clip(latitude, 0.0, math.pi / 2)
    return np.stack([latitude, np.mod(2.0 * theta, TWO_PI)], axis=-1)


def hemisphere_to_svd_array(hemisphere: np.ndarray) -> np.ndarray:
    latitude, longitude = hemisphere[..., 0], hemisphere[..., 1]
    return np.stack([
        np.cos(latitude / 2.0),
        np.sin(latitude / 2.0),
        np.mod(longitude / 2.0, math.pi),
    ], axis=-1)


def hemisphere_to_disk_array(hemisphere: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(hemisphere[..., 0]) / 2.0, hemisphere[..., 1]], axis=-1)


def disk_to_hemisphere_array(disk: np.ndarray) -> np.ndarray:
    r = np.clip(disk[..., 0], 0.0, 0.5)
    # acos(2r) escrito como atan2 para no perder precision cerca del ecuador
    sine = np.sqrt((1.0 - 2.0 * r) * (1.0 + 2.0 * r))
    return np.stack([np.arctan2(sine, 2.0 * r), disk[..., 1]], axis=-1)


def disk_to_sides_array(disk: np.ndarray) -> np.ndarray:
    r, phi = disk[..., 0], disk[..., 1]
    return np.stack([
        (1.0 - 2.0 * r * np.cos(phi + TWO_PI / 3.0)) / 3.0,
        (1.0 - 2.0 * r * np.cos(phi - TWO_PI / 3.0)) / 3.0,
        (1.0 - 2.0 * r * np.cos(phi)) / 3.0,
    ], axis=-1)


def sides_to_disk_array(sides: np.ndarray) -> np.ndarray:
    xy = np.asarray(sides, dtype=float) @ SIDES_TO_DISK.T
    r = np.hypot(xy[..., 0], xy[..., 1])
    return np.stack([r, np.mod(np.arctan2(xy[..., 1], xy[..., 0]), TWO_PI)], axis=-1)


def svd_to_sides_array(svd: np.ndarray) -> np.ndarray:
    """a2 = (1 - (s1^2 - s2^2) cos 2theta+) / 3 con theta+- = theta +- pi/3."""
    s1, s2, theta = svd[..., 0], svd[..., 1], svd[..., 2]
    spread = (s1 - s2) * (s1 + s2)
    return np.stack([
        (1.0 - spread * np.cos(2.0 * (theta + math.pi / 3.0))) / 3.0,
        (1.0 - spread * np.cos(2.0 * (theta - math.pi / 3.0))) / 3.0,
        (1.0 - spread * np.cos(2.0 * theta)) / 3.0,
    ], axis=-1)


def svd_to_disk_array(svd: np.ndarray) -> np.ndarray:
    s1, s2, theta = svd[..., 0], svd[..., 1], svd[..., 2]
    r = 0.5 * (s1 - s2) * (s1 + s2)
    return np.stack([np.clip(r, 0.0, 0.5), np.mod(2.0 * theta, TWO_PI)], axis=-1)


def svd_to_disk_radius_alternate(svd: np.ndarray) -> np.ndarray:
    """r = sqrt(1/4 - s1^2 s2^2), la segunda formula de la tabla."""
    product = svd[..., 0] * svd[..., 1]
    return np.sqrt(np.clip(0.25 - product * product, 0.0, None))


def disk_to_svd_array(disk: np.ndarray) -> np.ndarray:
    r = np.clip(disk[..., 0], 0.0, 0.5)
    return np.stack([
        np.sqrt(0.5 + r),
        np.sqrt(0.5 - r),
        np.mod(disk[..., 1] / 2.0, math.pi),
    ], axis=-1)


def svd_to_matrix_array(svd: np.ndarray) -> np.ndarray:
    s1, s2, theta = svd[..., 0], svd[..., 1], svd[..., 2]
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    return np.stack([
        np.stack([s1 * cos_t, s1 * sin_t], axis=-1),
        np.stack([-s2 * sin_t, s2 * cos_t], axis=-1),
    ], axis=-2)


def matrix_to_sides_array(matrices) -> np.ndarray:
    """diag((M Delta)^T (M Delta)): normas al cuadrado de las aristas."""
    edges = _as_matrix(matrices) @ delta3()
    return np.sum(edges * edges, axis=-2)


def matrix_to_disk_array(matrices) -> np.ndarray:
    """r sin phi = (M^T M)_12, r cos phi = ((M^T M)_11 - (M^T M)_22) / 2."""
    m = _as_matrix(matrices)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    x = 0.5 * (a * a + c * c - b * b - d * d)
    y = a * b + c * d
    return np.stack([np.hypot(x, y), np.mod(np.arctan2(y, x), TWO_PI)], axis=-1)


def hopf_array(matrices) -> np.ndarray:
    m = _as_matrix(matrices)
    m11, m12, m21, m22 = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    return np.stack([
        (m11 * m11 + m21 * m21) - (m12 * m12 + m22 * m22),
        2.0 * (m11 * m12 + m21 * m22),
        2.0 * (m11 * m22 - m21 * m12),
    ], axis=-1)


def matrix_to_hemisphere_cartesian_array(matrices) -> np.ndarray:
    point = 0.5 * hopf_array(matrices)
    point[..., 2] = np.abs(point[..., 2])
    return point


def matrix_to_hemisphere_array(matrices) -> np.ndarray:
    point = matrix_to_hemisphere_cartesian_array(matrices)
    latitude = np.arctan2(point[..., 2], np.hypot(point[..., 0], point[..., 1]))
    longitude = np.mod(np.arctan2(point[..., 1], point[..., 0]), TWO_PI)
    return np.stack([latitude, longitude], axis=-1)


def hemisphere_cartesian_array(hemisphere: np.ndarray) -> np.ndarray:
    latitude, longitude = hemisphere[..., 0], hemisphere[..., 1]
    return 0.5 * np.stack([
        np.cos(latitude) * np.cos(longitude),
        np.cos(latitude) * np.sin(longitude),
        np.sin(latitude),
    ], axis=-1)


def sides_area_array(sides: np.ndarray) -> np.ndarray:
    """K = sqrt(1 - 2 (a^4 + b^4 + c^4)) / 4, con el radicando recortado en 0."""
    sides = np.asarray(sides, dtype=float)
    radicand = 1.0 - 2.0 * np.sum(sides * sides, axis=-1)
    return 0.25 * np.sqrt(np.clip(radicand, 0.0, None))


# ----------------------------------------------------------------------------
# Grafo de conversiones y verificacion de ciclos
# ----------------------------------------------------------------------------

def _compose(*steps):
    def converted(values):
        for step in steps:
            values = step(values)
        return values
    return converted


_CONVERTERS = {
    ("svd", "sides"): svd_to_sides_array,
    ("svd", "hemisphere"): svd_to_hemisphere_array,
    ("svd", "disk"): svd_to_disk_array,
    ("svd", "matrix"): svd_to_matrix_array,
    ("sides", "disk"): sides_to_disk_array,
    ("sides", "hemisphere"): _compose(sides_to_disk_array, disk_to_hemisphere_array),
    ("sides", "svd"): _compose(sides_to_disk_array, disk_to_svd_array),
    ("sides", "matrix"): _compose(sides_to_disk_array, disk_to_svd_array, svd_to_matrix_array),
    ("hemisphere", "svd"): hemisphere_to_svd_array,
    ("hemisphere", "disk"): hemisphere_to_disk_array,
    ("hemisphere", "sides"): _compose(hemisphere_to_disk_array, disk_to_sides_array),
    ("hemisphere", "matrix"): _compose(hemisphere_to_svd_array, svd_to_matrix_array),
    ("disk", "svd"): disk_to_svd_array,
    ("disk", "hemisphere"): disk_to_hemisphere_array,
    ("disk", "sides"): disk_to_sides_array,
    ("disk", "matrix"): _compose(disk_to_svd_array, svd_to_matrix_array),
    ("matrix", "svd"): svd_array,
    ("matrix", "sides"): matrix_to_sides_array,
    ("matrix", "disk"): matrix_to_disk_array,
    ("matrix", "hemisphere"): matrix_to_hemisphere_array,
}


def _embed_svd(svd: np.ndarray) -> np.ndarray:
    s1, s2, theta = svd[..., 0], svd[..., 1], svd[..., 2]
    spread = (s1 - s2) * (s1 + s2)
    return np.stack([s1, s2, spread * np.cos(2.0 * theta), spread * np.sin(2.0 * theta)], axis=-1)


def _embed_disk(disk: np.ndarray) -> np.ndarray:
    return np.stack([disk[..., 0] * np.cos(disk[..., 1]), disk[..., 0] * np.sin(disk[..., 1])], axis=-1)


# Coordenadas continuas para comparar: sin saltos de angulo en 0/2pi ni en el polo
_EMBEDDINGS = {
    "svd": _embed_svd,
    "sides": lambda sides: np.asarray(sides, dtype=float),
    "hemisphere": hemisphere_cartesian_array,
    "disk": _embed_disk,
    "matrix": matrix_to_sides_array,
}


def convert_array(values, source: str, target: str) -> np.ndarray:
    if source not in REPRESENTATIONS or target not in REPRESENTATIONS:
        raise InvalidArgumentError(f"Representacion desconocida: {source} -> {target}")
    if source == target:
        return np.asarray(values, dtype=float)
    return _CONVERTERS[(source, target)](np.asarray(values, dtype=float))


def _discrepancy(representation: str, first: np.ndarray, second: np.ndarray) -> float:
    embed = _EMBEDDINGS[representation]
    return float(np.max(np.abs(embed(first) - embed(second)), initial=0.0))


def roundtrip_batch(representation: str, values) -> RoundtripReport:
    """
    Recorre todos los ciclos A -> B -> A y A -> B -> C -> A desde la representacion
    de entrada, y compara cada ruta de dos pasos con la conversion directa.
    """
    if representation not in REPRESENTATIONS:
        raise InvalidArgumentError(f"Representacion desconocida: {representation}")
    start = np.asarray(values, dtype=float)
    images = {representation: start}
    for other in REPRESENTATIONS:
        if other != representation:
            images[other] = convert_array(start, representation, other)

    cycles = {}
    for middle in REPRESENTATIONS:
        if middle == representation:
            continue
        back = convert_array(images[middle], middle, representation)
        cycles[f"{representation}>{middle}>{representation}"] = _discrepancy(representation, start, back)
    for first, second in itertools.permutations(REPRESENTATIONS, 2):
        if representation in (first, second):
            continue
        path = convert_array(convert_array(images[first], first, second), second, representation)
        cycles[f"{representation}>{first}>{second}>{representation}"] = _discrepancy(representation, start, path)
    for source, target in itertools.permutations(REPRESENTATIONS, 2):
        for middle in REPRESENTATIONS:
            if middle in (source, target):
                continue
            via = convert_array(convert_array(images[source], source, middle), middle, target)
            direct = convert_array(images[source], source, target)
            cycles[f"{source}>{middle}>{target} vs {source}>{target}"] = _discrepancy(target, via, direct)

    worst = max(cycles.values(), default=0.0)
    return RoundtripReport(max_discrepancy=worst, cycles=cycles, sample_count=int(start.shape[0]) if start.ndim > 1 else 1)


def _representation_of(x) -> tuple[str, np.ndarray]:
    if isinstance(x, SvdShape):
        return "svd", np.array([[x.sigma1, x.sigma2, x.theta]])
    if isinstance(x, SquaredSides):
        return "sides", np.array([x.as_tuple()])
    if isinstance(x, HemispherePoint):
        return "hemisphere", np.array([[x.latitude, x.longitude]])
    if isinstance(x, DiskPoint):
        return "disk", np.array([[x.r, x.phi]])
    if isinstance(x, ShapeMatrix):
        return "matrix", x.entries[None, :, :].copy()
    raise InvalidArgumentError(f"Representacion no soportada: {type(x).__name__}")


def roundtrip_all(x) -> RoundtripReport:
    representation, values = _representation_of(x)
    return roundtrip_batch(representation, values)


# ----------------------------------------------------------------------------
# Operaciones sobre tipos de valor
# ----------------------------------------------------------------------------

def svd2x2_factors(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(U, Sigma, V) con M = U Sigma V^T; V es la rotacion por theta."""
    u, sigma, theta = svd_factors_array(_as_matrix(M))
    cos_t, sin_t = math.cos(float(theta)), math.sin(float(theta))
    v = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    return u, np.diag(sigma), v


def svd2x2(M: ShapeMatrix) -> SvdShape:
    s1, s2, theta = svd_array(_as_matrix(M))
    return SvdShape(float(s1), float(s2), float(theta))


def _svd_values(s: SvdShape) -> np.ndarray:
    return np.array([s.sigma1, s.sigma2, s.theta])


def svd_to_hemisphere(s: SvdShape) -> HemispherePoint:
    latitude, longitude = svd_to_hemisphere_array(_svd_values(s))
    return HemispherePoint(float(latitude), float(longitude))


def hemisphere_to_svd(h: HemispherePoint) -> SvdShape:
    s1, s2, theta = hemisphere_to_svd_array(np.array([h.latitude, h.longitude]))
    return SvdShape(float(s1), float(s2), float(theta))


def hemisphere_to_disk(h: HemispherePoint) -> DiskPoint:
    return DiskPoint(math.cos(h.latitude) / 2.0, h.longitude)


def disk_to_hemisphere(d: DiskPoint) -> HemispherePoint:
    latitude, longitude = disk_to_hemisphere_array(np.array([d.r, d.phi]))
    return HemispherePoint(float(latitude), float(longitude))


def disk_to_sides(d: DiskPoint) -> SquaredSides:
    a2, b2, c2 = disk_to_sides_array(np.array([d.r, d.phi]))
    return SquaredSides(float(a2), float(b2), float(c2))


def sides_to_disk(s: SquaredSides) -> DiskPoint:
    r, phi = sides_to_disk_array(np.array(s.as_tuple()))
    if r > 0.5 + VALIDATION_TOLERANCE:
        raise NotATriangleError(f"Los lados caen fuera del disco: r={r}")
    return DiskPoint(float(r), float(phi))


def svd_to_sides(s: SvdShape) -> SquaredSides:
    a2, b2, c2 = svd_to_sides_array(_svd_values(s))
    return SquaredSides(float(a2), float(b2), float(c2))


def matrix_to_sides(M: ShapeMatrix) -> SquaredSides:
    a2, b2, c2 = matrix_to_sides_array(_as_matrix(M))
    return SquaredSides(float(a2), float(b2), float(c2))


def matrix_to_disk(M: ShapeMatrix) -> DiskPoint:
    r, phi = matrix_to_disk_array(_as_matrix(M))
    return DiskPoint(float(r), float(phi))


def svd_to_disk(s: SvdShape) -> DiskPoint:
    r, phi = svd_to_disk_array(_svd_values(s))
    return DiskPoint(float(r), float(phi))


def disk_to_svd(d: DiskPoint) -> SvdShape:
    s1, s2, theta = disk_to_svd_array(np.array([d.r, d.phi]))
    return SvdShape(float(s1), float(s2), float(theta))


def svd_to_matrix(s: SvdShape) -> ShapeMatrix:
    return ShapeMatrix(svd_to_matrix_array(_svd_values(s)))


def sides_to_hemisphere(s: SquaredSides) -> HemispherePoint:
    return disk_to_hemisphere(sides_to_disk(s))


def hemisphere_to_sides(h: HemispherePoint) -> SquaredSides:
    return disk_to_sides(hemisphere_to_disk(h))


def hemisphere_cartesian(h: HemispherePoint) -> np.ndarray:
    return hemisphere_cartesian_array(np.array([h.latitude, h.longitude]))


def hopf(M) -> np.ndarray:
    """Mapa de Hopf con signo: la tercera coordenada es 2 det(M)."""
    return hopf_array(_as_matrix(M))


def shape_to_hemisphere_cartesian(M: ShapeMatrix) -> np.ndarray:
    """Hopf(M) / 2 con la altura en valor absoluto (det < 0 se pliega al hemisferio norte)."""
    return matrix_to_hemisphere_cartesian_array(_as_matrix(M))


def height(s: SvdShape) -> float:
    return s.sigma1 * s.sigma2


def condition_number(s: SvdShape) -> float:
    return math.inf if s.sigma2 == 0.0 else s.sigma1 / s.sigma2


def area_from_svd(s: SvdShape) -> float:
    return s.sigma1 * s.sigma2 / SQRT12


def area_from_disk(d: DiskPoint) -> float:
    return math.sqrt(max((1.0 - 2.0 * d.r) * (1.0 + 2.0 * d.r), 0.0) / 48.0)


def area_from_hemisphere(h: HemispherePoint) -> float:
    return math.sin(h.latitude) / SQRT48


# ----------------------------------------------------------------------------
# Cuaterniones
# ----------------------------------------------------------------------------

def q3_from_quaternion(q: UnitQuaternion) -> np.ndarray:
    a, b, c, d = q.alpha, q.beta, q.gamma, q.delta
    return np.array([
        [a * a + b * b - c * c - d * d, 2.0 * (a * d + b * c), 2.0 * (b * d - a * c)],
        [-2.0 * (a * d - b * c), a * a - b * b + c * c - d * d, 2.0 * (a * b + c * d)],
        [2.0 * (a * c + b * d), -2.0 * (a * b - c * d), a * a - b * b - c * c + d * d],
    ])


def q4_from_quaternion(q: UnitQuaternion) -> np.ndarray:
    a, b, c, d = q.alpha, q.beta, q.gamma, q.delta
    return np.array([
        [a, -b, d, -c],
        [b, a, c, d],
        [-d, -c, a, b],
        [c, -d, -b, a],
    ])


def flatten_columns(M) -> np.ndarray:
    """(M11, M21, M12, M22)."""
    return _as_matrix(M).reshape(2, 2).flatten(order="F")


def unflatten_columns(vector) -> np.ndarray:
    return np.asarray(vector, dtype=float).reshape(2, 2, order="F")


def hopf_equivariance_check(q: UnitQuaternion, M) -> float:
    """||Hopf(Q4 M) - Q3 Hopf(M)||, con M aplanada por columnas."""
    matrix = _as_matrix(M)
    rotated = unflatten_columns(q4_from_quaternion(q) @ flatten_columns(matrix))
    residual = hopf_array(rotated) - q3_from_quaternion(q) @ hopf_array(matrix)
    return float(np.linalg.norm(residual))
