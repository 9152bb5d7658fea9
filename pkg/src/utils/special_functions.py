"""
Funciones especiales escritas a mano: beta incompleta regularizada y la
hipergeometrica de Gauss 2F1.

Ambas son kernels escalares en float64. La beta incompleta usa la fraccion
continua de Lentz con la reflexion x -> 1 - x; la 2F1 usa la serie de
potencias cerca de cero y transformaciones lineales (Pfaff, 1/z, 1 - z) fuera
de ese disco.
"""
import math

from scipy.special import gammaln, gammasgn

from src.utils.exceptions import InvalidArgumentError

_FPMIN = 1.0e-300
_EPS = 1.0e-15
_MAX_ITERATIONS = 10_000

SERIES_RADIUS = 0.9
LARGE_NEGATIVE_Z = -9.0


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Fraccion continua de I_x(a, b) evaluada con el metodo de Lentz modificado."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise InvalidArgumentError(
        f"La fraccion continua no converge para a={a}, b={b}, x={x}"
    )


def betainc(a: float, b: float, x: float) -> float:
    """
    Beta incompleta regularizada I_x(a, b).

    Para x por encima de (a + 1) / (a + b + 2) se evalua el complemento con
    los parametros intercambiados, donde la fraccion continua converge rapido.
    """
    if a <= 0 or b <= 0:
        raise InvalidArgumentError(f"Parametros de la beta deben ser positivos: a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"x fuera de [0, 1]: {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        gammaln(a + b) - gammaln(a) - gammaln(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


def betainc_upper(a: float, b: float, x: float) -> float:
    """Complemento 1 - I_x(a, b) sin cancelacion: I_{1-x}(b, a)."""
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"x fuera de [0, 1]: {x}")
    return betainc(b, a, 1.0 - x)


def _is_nonpositive_integer(value: float) -> bool:
    return value <= 0 and float(value).is_integer()


def _gamma_ratio(numerator: tuple, denominator: tuple) -> float:
    """prod Gamma(numerator) / prod Gamma(denominator); un polo en el denominador da 0."""
    if any(_is_nonpositive_integer(v) for v in denominator):
        return 0.0
    if any(_is_nonpositive_integer(v) for v in numerator):
        raise InvalidArgumentError(f"Polo de Gamma en {numerator}")
    sign = 1.0
    log_value = 0.0
    for v in numerator:
        sign *= gammasgn(v)
        log_value += gammaln(v)
    for v in denominator:
        sign *= gammasgn(v)
        log_value -= gammaln(v)
    return sign * math.exp(log_value)


def hyp2f1_series(a: float, b: float, c: float, z: float) -> float:
    """Serie de Gauss sumada hasta que el termino deja de aportar; exige |z| < 1."""
    if abs(z) >= 1.0:
        raise InvalidArgumentError(f"La serie de 2F1 diverge para |z| >= 1: z={z}")
    term = 1.0
    total = 1.0
    for n in range(_MAX_ITERATIONS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if term == 0.0 or abs(term) <= _EPS * abs(total):
            return total
    raise InvalidArgumentError(f"La serie de 2F1 no converge: a={a}, b={b}, c={c}, z={z}")


def hyp2f1_pfaff(a: float, b: float, c: float, z: float) -> float:
    """Transformacion de Pfaff: (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1)), para z < 1."""
    if z >= 1.0:
        raise InvalidArgumentError(f"Pfaff requiere z < 1: z={z}")
    w = z / (z - 1.0)
    if _is_nonpositive_integer(c - a) and not _is_nonpositive_integer(c - b):
        return (1.0 - z) ** (-b) * hyp2f1_series(c - a, b, c, w)
    return (1.0 - z) ** (-a) * hyp2f1_series(a, c - b, c, w)


def hyp2f1_large_negative(a: float, b: float, c: float, z: float) -> float:
    """Continuacion en 1/z para z < -1; requiere a - b no entero."""
    if z >= -1.0:
        raise InvalidArgumentError(f"La continuacion en 1/z requiere z < -1: z={z}")
    if float(a - b).is_integer():
        raise InvalidArgumentError(f"a - b entero no soportado en la continuacion 1/z: a={a}, b={b}")
    u = 1.0 / z
    first = _gamma_ratio((c, b - a), (b, c - a))
    second = _gamma_ratio((c, a - b), (a, c - b))
    total = 0.0
    if first != 0.0:
        total += first * (-z) ** (-a) * hyp2f1_series(a, a - c + 1.0, a - b + 1.0, u)
    if second != 0.0:
        total += second * (-z) ** (-b) * hyp2f1_series(b, b - c + 1.0, b - a + 1.0, u)
    return total


def _hyp2f1_near_one(a: float, b: float, c: float, z: float) -> float:
    s = c - a - b
    if float(s).is_integer():
        return hyp2f1_series(a, b, c, z)
    y = 1.0 - z
    first = _gamma_ratio((c, s), (c - a, c - b))
    second = _gamma_ratio((c, -s), (a, b))
    total = 0.0
    if first != 0.0:
        total += first * hyp2f1_series(a, b, 1.0 - s, y)
    if second != 0.0:
        total += second * y ** s * hyp2f1_series(c - a, c - b, 1.0 + s, y)
    return total


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """
    Hipergeometrica de Gauss 2F1(a, b; c; z) para z < 1.

    - |z| < 0.9: serie de potencias.
    - -9 <= z <= -0.9: Pfaff, cuyo argumento queda en [0.47, 0.9].
    - z < -9: continuacion en 1/z (Pfaff si a - b es entero).
    - 0.9 <= z < 1: conexion en 1 - z.
    """
    if _is_nonpositive_integer(c):
        raise InvalidArgumentError(f"c no puede ser entero no positivo: c={c}")
    if z >= 1.0:
        raise InvalidArgumentError(f"2F1 solo se evalua en la rama real z < 1: z={z}")
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if abs(z) < SERIES_RADIUS:
        return hyp2f1_series(a, b, c, z)
    if z <= -SERIES_RADIUS:
        if z < LARGE_NEGATIVE_Z and not float(a - b).is_integer():
            return hyp2f1_large_negative(a, b, c, z)
        return hyp2f1_pfaff(a, b, c, z)
    return _hyp2f1_near_one(a, b, c, z)
