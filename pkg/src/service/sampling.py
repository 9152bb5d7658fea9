"""
Generacion aleatoria de formas, clasificacion, probabilidades exactas y la
densidad en el espacio de angulos.

Los drivers Monte Carlo parten la muestra en chunks de MC_CHUNK_SIZE; el chunk
i usa el generador RngSeed.generator(i), asi que el resultado no depende de
cuantos workers se usen.
"""
import math
from typing import Callable

import numpy as np

from src.repository.models.frame_model import ShapeMatrix
from src.repository.models.sampling_model import (
    ACUTE,
    OBTUSE,
    RIGHT,
    ClassifiedShape,
    MonteCarloEstimate,
    RngSeed,
    SimplexAngles,
)
from src.repository.models.shape_model import HemispherePoint, SquaredSides
from src.repository.models.uniformity_model import PreShape
from src.service.conversions import (
    SIDES_TO_DISK,
    TWO_PI,
    disk_to_sides_array,
    hemisphere_to_disk_array,
    matrix_to_sides_array,
    sides_area_array,
    sides_to_disk,
)
from src.service.core import delta3
from src.service.geometry import angles_from_sides
from src.utils.environment import DEFAULT_SEED, MC_CHUNK_SIZE, MC_WORKERS
from src.utils.exceptions import DegenerateInputError, InvalidArgumentError
from src.utils.logger import logger
from src.utils.special_functions import betainc, betainc_upper
from src.utils.threads import execute_threads

RIGHT_ANGLE_TOLERANCE = 1e-9
SAMPLE_MODELS = ("gaussian", "hemisphere", "angles", "ndim")
BROKEN_STICK_TARGET = math.pi / math.sqrt(27.0)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSeed):
        return rng.generator()
    if rng is None:
        return RngSeed(DEFAULT_SEED).generator()
    return RngSeed(int(rng)).generator()


def as_seed(seed) -> RngSeed:
    if isinstance(seed, RngSeed):
        return seed
    return RngSeed(DEFAULT_SEED if seed is None else int(seed))


def _check_count(n_samples: int) -> None:
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 1:
        raise InvalidArgumentError(f"n_samples debe ser un entero >= 1: {n_samples}")


def _check_dims(m: int, k: int) -> None:
    if m < 1 or k < 2:
        raise InvalidArgumentError(f"Dimensiones invalidas: m={m}, k={k} (se requiere m >= 1, k >= 2)")


# ----------------------------------------------------------------------------
# Muestreadores por lotes
# ----------------------------------------------------------------------------

def _normalized_gaussian(rng: np.random.Generator, shape: tuple) -> np.ndarray:
    """Normales estandar normalizadas por la norma de Frobenius de cada muestra; las nulas se vuelven a sortear."""
    draws = rng.standard_normal(shape)
    axes = tuple(range(1, len(shape)))
    norms = np.sqrt(np.sum(draws * draws, axis=axes))
    zero = norms == 0.0
    while np.any(zero):
        logger.debug("[Muestreo] Muestra gaussiana nula, se vuelve a sortear")
        draws[zero] = rng.standard_normal((int(zero.sum()),) + shape[1:])
        norms = np.sqrt(np.sum(draws * draws, axis=axes))
        zero = norms == 0.0
    return draws / norms.reshape((-1,) + (1,) * (len(shape) - 1))


def gaussian_matrices(rng, size: int) -> np.ndarray:
    """(size, 2, 2) matrices de forma a partir de cuatro normales independientes."""
    return _normalized_gaussian(_as_generator(rng), (size, 2, 2))


def uniform_hemisphere_array(rng, size: int) -> np.ndarray:
    """(size, 2) latitud y longitud: altura uniforme en [0, 1/2] y phi uniforme en [0, 2 pi)."""
    generator = _as_generator(rng)
    height = 0.5 * generator.random(size)
    longitude = TWO_PI * generator.random(size)
    return np.stack([np.arcsin(2.0 * height), longitude], axis=-1)


def uniform_simplex_array(rng, size: int) -> np.ndarray:
    """(size, 3) exponenciales independientes divididas por su suma."""
    draws = _as_generator(rng).standard_exponential((size, 3))
    return draws / draws.sum(axis=1, keepdims=True)


def ndim_preshape_array(rng, m: int, k: int, size: int) -> np.ndarray:
    """(size, m, k-1) normales estandar normalizadas: la preforma de k puntos gaussianos en R^m."""
    _check_dims(m, k)
    return _normalized_gaussian(_as_generator(rng), (size, m, k - 1))


def preshape_sides_array(preshapes: np.ndarray) -> np.ndarray:
    """Lados al cuadrado de triangulos en R^m (k = 3): normas de las columnas de Z Delta."""
    edges = np.asarray(preshapes, dtype=float) @ delta3()
    return np.sum(edges * edges, axis=-2)


def simplex_angles_to_sides_array(angles: np.ndarray) -> np.ndarray:
    """Ley de los senos: a^2 : b^2 : c^2 = sin^2(pi alpha) : sin^2(pi beta) : sin^2(pi gamma)."""
    sines = np.sin(math.pi * np.asarray(angles, dtype=float)) ** 2
    return sines / sines.sum(axis=-1, keepdims=True)


def sides_to_angles_array(sides: np.ndarray) -> np.ndarray:
    """Angulos divididos por pi para un arreglo (..., 3) de lados al cuadrado."""
    sides = np.asarray(sides, dtype=float)
    K = sides_area_array(sides)
    return np.arctan2(4.0 * K[..., None], 1.0 - 2.0 * sides) / math.pi


def shape_sides_batch(model: str, rng, size: int, m: int = 2) -> np.ndarray:
    """Lados al cuadrado de `size` formas del modelo indicado."""
    if model == "gaussian":
        return matrix_to_sides_array(gaussian_matrices(rng, size))
    if model == "hemisphere":
        return disk_to_sides_array(hemisphere_to_disk_array(uniform_hemisphere_array(rng, size)))
    if model == "angles":
        return simplex_angles_to_sides_array(uniform_simplex_array(rng, size))
    if model == "ndim":
        return preshape_sides_array(ndim_preshape_array(rng, m, 3, size))
    raise InvalidArgumentError(f"Modelo de muestreo desconocido: {model}")


# ----------------------------------------------------------------------------
# Muestras individuales
# ----------------------------------------------------------------------------

def sample_gaussian_shape(rng) -> ShapeMatrix:
    return ShapeMatrix(gaussian_matrices(rng, 1)[0])


def sample_uniform_hemisphere(rng) -> HemispherePoint:
    latitude, longitude = uniform_hemisphere_array(rng, 1)[0]
    return HemispherePoint(float(latitude), float(longitude))


def sample_uniform_angles(rng) -> SimplexAngles:
    return SimplexAngles(*(float(v) for v in uniform_simplex_array(rng, 1)[0]))


def sample_ndim_shape(m: int, k: int, rng) -> PreShape:
    return PreShape(ndim_preshape_array(rng, m, k, 1)[0])


# ----------------------------------------------------------------------------
# Clasificacion
# ----------------------------------------------------------------------------

def classify(s: SquaredSides) -> ClassifiedShape:
    """Obtuso si el mayor lado al cuadrado supera 1/2; recto si queda a 1e-9 de 1/2."""
    largest = max(s.as_tuple())
    if abs(largest - 0.5) <= RIGHT_ANGLE_TOLERANCE:
        triangle_class = RIGHT
    elif largest > 0.5:
        triangle_class = OBTUSE
    else:
        triangle_class = ACUTE
    return ClassifiedShape(sides=s, triangle_class=triangle_class, disk=sides_to_disk(s))


def classify_batch(sides: np.ndarray) -> np.ndarray:
    largest = np.max(np.asarray(sides, dtype=float), axis=-1)
    labels = np.where(largest > 0.5, OBTUSE, ACUTE).astype(object)
    labels[np.abs(largest - 0.5) <= RIGHT_ANGLE_TOLERANCE] = RIGHT
    return labels


def angles_to_sides(angles: SimplexAngles) -> SquaredSides:
    sines = np.sin(math.pi * np.array(angles.as_tuple())) ** 2
    total = float(sines.sum())
    if total == 0.0:
        raise DegenerateInputError(f"Angulos sin triangulo asociado: {angles.as_tuple()}")
    return SquaredSides(*(float(v) for v in sines / total))


def sides_to_angles(s: SquaredSides) -> SimplexAngles:
    angles = angles_from_sides(s)
    return SimplexAngles(*(a / math.pi for a in angles.as_tuple()))


# ----------------------------------------------------------------------------
# Drivers Monte Carlo
# ----------------------------------------------------------------------------

def _chunks(n_samples: int) -> list[tuple[int, int]]:
    chunk_size = max(int(MC_CHUNK_SIZE), 1)
    return [
        (index, min(chunk_size, n_samples - start))
        for index, start in enumerate(range(0, n_samples, chunk_size))
    ]


def run_chunks(n_samples: int, seed, task: Callable[[np.random.Generator, int], object], workers: int | None = None) -> list:
    """Ejecuta task(generador, tamano) por chunk y devuelve los resultados en orden de chunk."""
    _check_count(n_samples)
    seed = as_seed(seed)
    chunks = _chunks(n_samples)
    return execute_threads(
        lambda chunk: task(seed.generator(chunk[0]), chunk[1]),
        chunks,
        max_workers=workers or MC_WORKERS,
    )


def _count(n_samples: int, seed, predicate: Callable[[np.random.Generator, int], np.ndarray], workers, label: str) -> MonteCarloEstimate:
    counts = run_chunks(n_samples, seed, lambda rng, size: int(np.count_nonzero(predicate(rng, size))), workers)
    estimate = MonteCarloEstimate(successes=int(sum(counts)), n_samples=n_samples)
    logger.info(f"[Muestreo] {label}: {estimate.value:.6f} +/- {estimate.standard_error:.6f} (n={n_samples})")
    return estimate


def acute_probability_mc(n_samples: int, seed=None, workers: int | None = None) -> MonteCarloEstimate:
    """Fraccion de formas gaussianas agudas; los rectos cuentan como agudos."""
    return _count(
        n_samples, seed,
        lambda rng, size: matrix_to_sides_array(gaussian_matrices(rng, size)).max(axis=1) <= 0.5,
        workers, "Fraccion aguda (gaussiano)",
    )


def obtuse_probability_mc_ndim(n: int, n_samples: int, seed=None, workers: int | None = None) -> MonteCarloEstimate:
    if n < 2:
        raise InvalidArgumentError(f"La dimension debe ser >= 2: {n}")
    return _count(
        n_samples, seed,
        lambda rng, size: preshape_sides_array(ndim_preshape_array(rng, n, 3, size)).max(axis=1) > 0.5,
        workers, f"Fraccion obtusa en R^{n}",
    )


def uniform_angles_obtuse_mc(n_samples: int, seed=None, workers: int | None = None) -> MonteCarloEstimate:
    return _count(
        n_samples, seed,
        lambda rng, size: uniform_simplex_array(rng, size).max(axis=1) > 0.5,
        workers, "Fraccion obtusa (angulos uniformes)",
    )


def broken_stick_fraction(n_samples: int, seed=None, workers: int | None = None) -> MonteCarloEstimate:
    """(a2, b2, c2) uniforme en el simplex; se acepta si a^4 + b^4 + c^4 <= 1/2."""
    return _count(
        n_samples, seed,
        lambda rng, size: np.sum(uniform_simplex_array(rng, size) ** 2, axis=1) <= 0.5,
        workers, "Fraccion de triangulos (palo roto)",
    )


def sample_sides(model: str, n_samples: int, seed=None, workers: int | None = None, m: int = 2) -> np.ndarray:
    """(n_samples, 3) lados al cuadrado concatenados en orden de chunk."""
    if model not in SAMPLE_MODELS:
        raise InvalidArgumentError(f"Modelo de muestreo desconocido: {model}")
    parts = run_chunks(n_samples, seed, lambda rng, size: shape_sides_batch(model, rng, size, m), workers)
    return np.concatenate(parts, axis=0)


def sample_preshapes(m: int, k: int, n_samples: int, seed=None, workers: int | None = None) -> np.ndarray:
    _check_dims(m, k)
    parts = run_chunks(n_samples, seed, lambda rng, size: ndim_preshape_array(rng, m, k, size), workers)
    return np.concatenate(parts, axis=0)


def sample_matrices(n_samples: int, seed=None, workers: int | None = None) -> np.ndarray:
    parts = run_chunks(n_samples, seed, gaussian_matrices, workers)
    return np.concatenate(parts, axis=0)


# ----------------------------------------------------------------------------
# Probabilidades exactas
# ----------------------------------------------------------------------------

def obtuse_probability_ndim(n: int) -> float:
    """3 (1 - I(3/4; n/2, n/2)): probabilidad de un triangulo gaussiano obtuso en R^n."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidArgumentError(f"La dimension debe ser un entero >= 2: {n}")
    return 3.0 * betainc_upper(n / 2.0, n / 2.0, 0.75)


def squared_side_marginal_cdf(n: int, x: float, clamp: bool = False) -> float:
    """Cada lado al cuadrado se distribuye como (2/3) Beta(n/2, n/2)."""
    if n < 2:
        raise InvalidArgumentError(f"La dimension debe ser >= 2: {n}")
    if not 0.0 <= x <= 2.0 / 3.0:
        if not clamp:
            raise InvalidArgumentError(f"x fuera de [0, 2/3]: {x}")
        x = min(max(x, 0.0), 2.0 / 3.0)
    return betainc(n / 2.0, n / 2.0, min(1.5 * x, 1.0))


def ellipticity_cdf(n: int, x: float) -> float:
    """P(2 s1 s2 / (s1^2 + s2^2) < x) = x^(n-1) para un triangulo gaussiano en R^n."""
    if n < 2:
        raise InvalidArgumentError(f"La dimension debe ser >= 2: {n}")
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"x fuera de [0, 1]: {x}")
    return x ** (n - 1)


# ----------------------------------------------------------------------------
# Densidad en el espacio de angulos
# ----------------------------------------------------------------------------

def angle_density_array(alpha, beta) -> np.ndarray:
    """
    Densidad de (alpha, beta) respecto de d alpha d beta cuando la forma es
    uniforme en la semiesfera; integra 1 sobre el simplex.

    Con p = sin(2 pi alpha), sigma = sum sin^2(pi alpha) y s los lados al
    cuadrado normalizados, ds = pi J d alpha con J = diag(p)/sigma - s p^T/sigma.
    La densidad del disco, (2/pi) / sqrt(1 - 4 r^2), se compone con
    |det(pi Delta J Delta^T)| y los factores de area de ambos simplex.
    En el borde del simplex devuelve inf.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    angles = np.stack(np.broadcast_arrays(alpha, beta, 1.0 - alpha - beta), axis=-1)
    boundary = np.min(angles, axis=-1) <= 0.0

    with np.errstate(divide="ignore", invalid="ignore"):
        sines = np.sin(math.pi * angles) ** 2
        sigma = sines.sum(axis=-1)
        s = sines / sigma[..., None]
        p = np.sin(TWO_PI * angles)
        jacobian = (np.eye(3) * p[..., None, :] - s[..., :, None] * p[..., None, :]) / sigma[..., None, None]
        delta = delta3()
        determinant = np.abs(np.linalg.det(delta @ jacobian @ delta.T))
        xy = s @ SIDES_TO_DISK.T
        radicand = 1.0 - 4.0 * np.sum(xy * xy, axis=-1)
        density = 3.0 * math.sqrt(3.0) * math.pi * determinant / np.sqrt(radicand)

    return np.where(boundary | ~(radicand > 0.0), np.inf, density)


def angle_density(angles: SimplexAngles) -> float:
    return float(angle_density_array(angles.alpha, angles.beta))


def angle_bin_index(angles: np.ndarray, divisions: int) -> np.ndarray:
    """
    Indice de la celda baricentrica de cada punto del simplex dividido en
    divisions^2 triangulos: primero los d(d+1)/2 que apuntan hacia arriba y
    luego los d(d-1)/2 invertidos.
    """
    if divisions < 1:
        raise InvalidArgumentError(f"divisions debe ser >= 1: {divisions}")
    scaled = np.asarray(angles, dtype=float)[..., :2] * divisions
    cell = np.clip(np.floor(scaled), 0, divisions - 1).astype(int)
    i, j = cell[..., 0], cell[..., 1]
    inverted = (scaled[..., 0] - i) + (scaled[..., 1] - j) >= 1.0
    inverted &= i + j <= divisions - 2
    up_index = _triangular_index(i, j, divisions)
    down_index = divisions * (divisions + 1) // 2 + _triangular_index(i, j, divisions - 1)
    return np.where(inverted, down_index, up_index)


def _triangular_index(i: np.ndarray, j: np.ndarray, size: int) -> np.ndarray:
    # filas i = 0..size-1 con size - i celdas cada una
    j = np.minimum(j, np.maximum(size - 1 - i, 0))
    return i * size - i * (i - 1) // 2 + j


def angle_bin_vertices(divisions: int) -> list[np.ndarray]:
    """Vertices (alpha, beta) de cada celda, en el mismo orden que angle_bin_index."""
    d = float(divisions)
    cells = []
    for i in range(divisions):
        for j in range(divisions - i):
            cells.append(np.array([[i, j], [i + 1, j], [i, j + 1]]) / d)
    for i in range(divisions - 1):
        for j in range(divisions - 1 - i):
            cells.append(np.array([[i + 1, j], [i + 1, j + 1], [i, j + 1]]) / d)
    return cells


def angle_bin_counts(angles: np.ndarray, divisions: int = 10) -> np.ndarray:
    index = angle_bin_index(angles, divisions)
    return np.bincount(index.ravel(), minlength=divisions * divisions)
