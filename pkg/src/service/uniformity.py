"""
Pruebas de uniformidad de muestras de preformas.

- chikuse_jupp: segundo momento de Z^T Z frente a I/(k-1), referencia chi^2.
- sigma_min: KS de 1/sigma_min contra su densidad exacta (Z cuadrada) o
  contra un nulo simulado (Z no cuadrada).
- height / longitude: marginales de la semiesfera para triangulos en el plano.
"""
import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats
from scipy.special import gammaincc, gammaln

from src.repository.models.sampling_model import RngSeed
from src.repository.models.uniformity_model import PreShape, SuiteReport, TestReport
from src.service.conversions import TWO_PI, matrix_to_hemisphere_array
from src.service.sampling import as_seed, ndim_preshape_array
from src.utils.environment import SIGMA_MIN_NULL_DRAWS, VALIDATION_TOLERANCE
from src.utils.exceptions import EmptySampleSetError, InvalidArgumentError, InvalidSampleSetError
from src.utils.logger import logger
from src.utils.special_functions import gauss_2f1
from src.utils.threads import execute_threads

CDF_TABLE_SEGMENTS = 200
NULL_STREAM = 1


def as_preshape_array(samples) -> np.ndarray:
    """Lista de PreShape (o arreglo t x m x (k-1)) -> arreglo validado."""
    if isinstance(samples, np.ndarray):
        array = np.asarray(samples, dtype=float)
    else:
        samples = list(samples)
        if not samples:
            raise EmptySampleSetError("El conjunto de muestras esta vacio")
        shapes = {s.entries.shape for s in samples}
        if len(shapes) > 1:
            raise InvalidSampleSetError(f"Las muestras no comparten (m, k): {sorted(shapes)}")
        array = np.stack([s.entries for s in samples])
    if array.ndim != 3:
        raise InvalidSampleSetError(f"Se esperaba un arreglo t x m x (k-1): {array.shape}")
    if array.shape[0] == 0:
        raise EmptySampleSetError("El conjunto de muestras esta vacio")
    norms = np.sqrt(np.sum(array * array, axis=(1, 2)))
    if np.any(np.abs(norms - 1.0) > VALIDATION_TOLERANCE):
        raise InvalidSampleSetError("Hay muestras cuya norma de Frobenius no es 1")
    return array


def chi2_upper_tail(x: float, df: float) -> float:
    """Q(df/2, x/2): cola superior de chi^2."""
    if x < 0 or df <= 0 or math.isnan(x):
        raise InvalidArgumentError(f"Argumentos invalidos para chi^2: x={x}, df={df}")
    return float(gammaincc(df / 2.0, x / 2.0))


def chikuse_jupp_df(k: int) -> int:
    return (k - 2) * (k + 1) // 2


def chikuse_jupp(samples) -> TestReport:
    """
    S = ((k-1)(m(k-1)+2)/2) t tr((Mbar - I/(k-1))^2), Mbar = promedio de Z^T Z.

    Bajo uniformidad S es asintoticamente chi^2 con (k-2)(k+1)/2 grados de
    libertad; con k = 2 el estadistico es identicamente 0 y el p-valor 1.
    """
    z = as_preshape_array(samples)
    t, m, q = z.shape
    k = q + 1
    mean = np.einsum("tia,tib->ab", z, z) / t
    deviation = mean - np.eye(q) / q
    statistic = q * (m * q + 2) / 2.0 * t * float(np.trace(deviation @ deviation))
    df = chikuse_jupp_df(k)
    p_value = 1.0 if df == 0 else chi2_upper_tail(max(statistic, 0.0), df)
    return TestReport(
        name="chikuse_jupp",
        statistic=statistic,
        reference=f"chi2(df={df})",
        p_value=p_value,
        sample_count=t,
    )


# ----------------------------------------------------------------------------
# 1 / sigma_min
# ----------------------------------------------------------------------------

def _check_square_order(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise InvalidArgumentError(f"La densidad de 1/sigma_min requiere m >= 2: {m}")


@lru_cache(maxsize=32)
def _density_constant(m: int) -> float:
    """2 m Gamma((m+1)/2) Gamma(m^2/2) / (sqrt(pi) Gamma(m(m+1)/2 - 1))."""
    log_value = (
        gammaln((m + 1) / 2.0) + gammaln(m * m / 2.0)
        - 0.5 * math.log(math.pi) - gammaln(m * (m + 1) / 2.0 - 1.0)
    )
    return 2.0 * m * math.exp(log_value)


def inv_sigma_min_density(x: float, m: int) -> float:
    """
    Densidad de 1/sigma_min(Z) para Z cuadrada m x m uniforme en la esfera.

    El argumento se llama x para no confundirlo con el tamano de muestra t.
    El soporte es x >= sqrt(m), porque ||Z||_F = 1 obliga sigma_min <= 1/sqrt(m).
    """
    _check_square_order(m)
    excess = x * x - m
    if excess <= 0.0:
        return 0.0
    exponent = m * (m + 1) / 2.0 - 2.0
    hyper = gauss_2f1((m - 1) / 2.0, m / 2.0 + 1.0, (m * m + m) / 2.0 - 1.0, -excess)
    return _density_constant(m) * x ** (1.0 - m * m) * excess ** exponent * hyper


@lru_cache(maxsize=32)
def _cdf_table(m: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Tabla de la CDF en u = sqrt(m)/x in (0, 1], donde el integrando queda
    acotado: la cola de la densidad decae como x^-2.
    """
    root = math.sqrt(m)

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        x = root / u
        return inv_sigma_min_density(x, m) * root / (u * u)

    nodes = np.linspace(0.0, 1.0, CDF_TABLE_SEGMENTS + 1)
    pieces = np.array([integrate.quad(integrand, lo, hi, limit=200)[0] for lo, hi in zip(nodes[:-1], nodes[1:])])
    # tail[i] = integral de nodes[i] a 1
    tail = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    total = float(tail[0])
    if abs(total - 1.0) > 1e-6:
        logger.warning(f"[Uniformidad] La densidad de 1/sigma_min (m={m}) integra {total:.9f}; se normaliza")
    return nodes, tail / total


def inv_sigma_min_cdf(x, m: int):
    """CDF de 1/sigma_min; forma cerrada 1 - 2 sqrt(x^2 - 1)/x^2 para m = 2."""
    _check_square_order(m)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 2:
            values = 1.0 - 2.0 * np.sqrt(np.clip(x * x - 1.0, 0.0, None)) / (x * x)
        else:
            nodes, tail = _cdf_table(m)
            u = np.clip(math.sqrt(m) / x, 0.0, 1.0)
            values = np.interp(u, nodes, tail)
    values = np.where(x * x <= m, 0.0, np.where(np.isinf(x), 1.0, values))
    values = np.clip(values, 0.0, 1.0)
    return float(values) if values.ndim == 0 else values


def inverse_smallest_singular_values(samples) -> np.ndarray:
    z = as_preshape_array(samples)
    smallest = np.linalg.svd(z, compute_uv=False)[:, -1]
    with np.errstate(divide="ignore"):
        return 1.0 / smallest


# ----------------------------------------------------------------------------
# Bondad de ajuste
# ----------------------------------------------------------------------------

def kolmogorov_p_value(statistic: float, n: int) -> float:
    root = math.sqrt(n)
    return float(stats.kstwobign.sf((root + 0.12 + 0.11 / root) * statistic))


def ks_test(samples: Sequence[float], cdf: Callable, name: str = "ks", reference: str = "cdf") -> TestReport:
    """KS de una muestra con p-valor asintotico de Kolmogorov; cdf debe aceptar arreglos."""
    values = np.sort(np.asarray(samples, dtype=float).ravel())
    n = values.size
    if n == 0:
        raise EmptySampleSetError(f"Muestra vacia para la prueba {name}")
    cdf_values = np.asarray(cdf(values), dtype=float)
    ranks = np.arange(1, n + 1)
    statistic = float(max(np.max(ranks / n - cdf_values), np.max(cdf_values - (ranks - 1) / n)))
    return TestReport(name, statistic, reference, kolmogorov_p_value(statistic, n), n)


def ks_two_sample_test(samples: Sequence[float], reference_samples: Sequence[float], name: str = "ks_2samp") -> TestReport:
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise EmptySampleSetError(f"Muestra vacia para la prueba {name}")
    result = stats.ks_2samp(samples, np.asarray(reference_samples, dtype=float).ravel())
    return TestReport(name, float(result.statistic), "nulo simulado", float(result.pvalue), int(samples.size))


def chi_square_test(observed, expected_probabilities, name: str = "chi_square") -> TestReport:
    """
    Pearson chi^2 con df = bins - 1 sobre las celdas de probabilidad positiva.
    Conteos en celdas de probabilidad cero dan p-valor 0.
    """
    observed = np.asarray(observed, dtype=float).ravel()
    probabilities = np.asarray(expected_probabilities, dtype=float).ravel()
    if observed.shape != probabilities.shape:
        raise InvalidArgumentError(f"Conteos y probabilidades de distinto tamano: {observed.shape} vs {probabilities.shape}")
    total = observed.sum()
    if total <= 0:
        raise EmptySampleSetError(f"Sin conteos para la prueba {name}")
    probabilities = probabilities / probabilities.sum()
    support = probabilities > 0.0
    if np.any(observed[~support] > 0):
        return TestReport(name, math.inf, "chi2", 0.0, int(total))
    expected = total * probabilities[support]
    statistic = float(np.sum((observed[support] - expected) ** 2 / expected))
    df = int(support.sum()) - 1
    p_value = float(stats.chi2.sf(statistic, df)) if df > 0 else 1.0
    return TestReport(name, statistic, f"chi2(df={df})", p_value, int(total))


def height_longitude_correlations(heights, longitudes) -> tuple[float, float]:
    """Correlaciones de Pearson de la altura con cos(phi) y sin(phi); 0 si la altura es constante."""
    heights = np.asarray(heights, dtype=float)
    longitudes = np.asarray(longitudes, dtype=float)
    if heights.size < 2 or np.ptp(heights) == 0.0:
        return 0.0, 0.0
    correlations = []
    for projection in (np.cos(longitudes), np.sin(longitudes)):
        if np.ptp(projection) == 0.0:
            correlations.append(0.0)
        else:
            correlations.append(float(stats.pearsonr(heights, projection)[0]))
    return correlations[0], correlations[1]


def height_longitude_independence(heights, longitudes, bins: int = 10) -> TestReport:
    """
    Tabla de contingencia bins x bins de altura (en [0, 1/2]) y longitud (en [0, 2 pi)).
    Filas y columnas vacias se descartan; si queda una sola no hay dependencia posible.
    """
    table, _, _ = np.histogram2d(
        np.asarray(heights, dtype=float),
        np.asarray(longitudes, dtype=float),
        bins=bins,
        range=[[0.0, 0.5], [0.0, TWO_PI]],
    )
    table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
    total = int(table.sum())
    if min(table.shape) < 2:
        return TestReport("independence", 0.0, "chi2(df=0)", 1.0, total)
    statistic, p_value, dof, _ = stats.chi2_contingency(table)
    return TestReport("independence", float(statistic), f"chi2(df={dof})", float(p_value), total)


def _uniform_cdf(low: float, high: float) -> Callable:
    return lambda x: np.clip((np.asarray(x) - low) / (high - low), 0.0, 1.0)


def height_test(heights) -> TestReport:
    return ks_test(heights, _uniform_cdf(0.0, 0.5), name="height", reference="U[0, 1/2]")


def longitude_test(longitudes) -> TestReport:
    return ks_test(longitudes, _uniform_cdf(0.0, TWO_PI), name="longitude", reference="U[0, 2pi)")


def sigma_min_test(samples, seed=None) -> TestReport | None:
    """
    KS de 1/sigma_min. Z cuadrada usa la CDF exacta; en otro caso se compara
    con SIGMA_MIN_NULL_DRAWS preformas gaussianas sembradas. Con min(m, k-1) < 2
    sigma_min es constante y no hay prueba.
    """
    z = as_preshape_array(samples)
    _, m, q = z.shape
    if min(m, q) < 2:
        return None
    values = inverse_smallest_singular_values(z)
    if m == q:
        return ks_test(values, lambda x: inv_sigma_min_cdf(x, m), name="sigma_min", reference=f"1/sigma_min exacta (m={m})")
    rng = RngSeed(as_seed(seed).seed, stream=NULL_STREAM).generator()
    null = inverse_smallest_singular_values(ndim_preshape_array(rng, m, q + 1, SIGMA_MIN_NULL_DRAWS))
    report = ks_two_sample_test(values, null, name="sigma_min")
    logger.debug(f"[Uniformidad] sigma_min contra nulo simulado de {SIGMA_MIN_NULL_DRAWS} muestras")
    return report


def uniformity_suite(samples, which: str = "all", seed=None, workers: int | None = None) -> SuiteReport:
    """
    Corre las pruebas pedidas (chikuse-jupp, sigma-min, hemisphere o all) sobre
    el mismo conjunto inmutable de muestras, en paralelo si hay workers.
    """
    if which not in ("all", "chikuse-jupp", "sigma-min", "hemisphere"):
        raise InvalidArgumentError(f"Prueba desconocida: {which}")
    z = as_preshape_array(samples)
    z.flags.writeable = False
    _, m, q = z.shape

    tasks: list[Callable[[], TestReport | list[TestReport] | None]] = []
    if which in ("all", "chikuse-jupp"):
        tasks.append(lambda: chikuse_jupp(z))
    if which in ("all", "sigma-min"):
        tasks.append(lambda: sigma_min_test(z, seed))
    if which in ("all", "hemisphere"):
        if m == 2 and q == 2:
            tasks.append(lambda: _hemisphere_reports(z))
        elif which == "hemisphere":
            raise InvalidSampleSetError(f"Las marginales de la semiesfera requieren m=2, k=3: m={m}, k={q + 1}")

    logger.info(f"[Uniformidad] {len(tasks)} pruebas sobre {z.shape[0]} muestras (m={m}, k={q + 1})")
    results = execute_threads(lambda task: task(), tasks, max_workers=workers)

    reports: dict[str, TestReport] = {}
    for result in results:
        for report in result if isinstance(result, list) else [result]:
            if report is not None:
                reports[report.name] = report
                logger.info(f"[Uniformidad] {report.name}: estadistico={report.statistic:.6g} p={report.p_value:.6g}")
    return SuiteReport(reports)


def _hemisphere_reports(z: np.ndarray) -> list[TestReport]:
    hemisphere = matrix_to_hemisphere_array(z)
    heights = 0.5 * np.sin(hemisphere[:, 0])
    longitudes = hemisphere[:, 1]
    with_cos, with_sin = height_longitude_correlations(heights, longitudes)
    logger.debug(f"[Uniformidad] correlacion altura-longitud: cos={with_cos:.4g} sin={with_sin:.4g}")
    return [height_test(heights), longitude_test(longitudes), height_longitude_independence(heights, longitudes)]


def equilateral_point_mass(t: int, m: int = 2) -> np.ndarray:
    """t copias de la preforma equilatera (Z^T Z = I/(k-1)) para m x 2."""
    if m < 2:
        raise InvalidArgumentError(f"La preforma equilatera requiere m >= 2: {m}")
    z = np.zeros((m, 2))
    z[0, 0] = z[1, 1] = 1.0 / math.sqrt(2.0)
    return np.repeat(z[None], t, axis=0)


def as_preshapes(array: np.ndarray) -> list[PreShape]:
    return [PreShape(z) for z in np.asarray(array, dtype=float)]
