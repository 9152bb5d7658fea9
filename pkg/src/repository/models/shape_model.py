import math
from dataclasses import dataclass, field

from src.utils.environment import VALIDATION_TOLERANCE
from src.utils.exceptions import (
    InvalidArgumentError,
    InvalidQuaternionError,
    NotATriangleError,
    OutsideDiskError,
)

TWO_PI = 2.0 * math.pi


def wrap_angle(value: float, period: float) -> float:
    """Reduce value a [0, period); evita que el redondeo devuelva exactamente period."""
    wrapped = math.fmod(value, period)
    if wrapped < 0.0:
        wrapped += period
    if wrapped >= period:
        wrapped = 0.0
    return wrapped


@dataclass(frozen=True)
class SvdShape:
    """SVD reducida (sigma1, sigma2, theta) de la matriz de forma; U se descarta."""
    sigma1: float
    sigma2: float
    theta: float

    def __post_init__(self):
        tol = VALIDATION_TOLERANCE
        if not (1.0 + tol >= self.sigma1 >= self.sigma2 - tol and self.sigma2 >= -tol):
            raise InvalidArgumentError(f"Valores singulares fuera de orden: {self.sigma1}, {self.sigma2}")
        if abs(self.sigma1 ** 2 + self.sigma2 ** 2 - 1.0) > tol:
            raise InvalidArgumentError(f"sigma1^2 + sigma2^2 debe ser 1: {self.sigma1}, {self.sigma2}")
        object.__setattr__(self, "sigma1", float(min(max(self.sigma1, 0.0), 1.0)))
        object.__setattr__(self, "sigma2", float(min(max(self.sigma2, 0.0), self.sigma1)))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta), math.pi))


@dataclass(frozen=True)
class SquaredSides:
    """Cuadrados de los lados (a2, b2, c2) con suma 1: coordenadas baricentricas de la forma."""
    a2: float
    b2: float
    c2: float

    def __post_init__(self):
        tol = VALIDATION_TOLERANCE
        values = (self.a2, self.b2, self.c2)
        if any(not math.isfinite(v) for v in values):
            raise InvalidArgumentError(f"Lados no finitos: {values}")
        if min(values) < -tol:
            raise NotATriangleError(f"Cuadrado de lado negativo: {values}")
        if abs(sum(values) - 1.0) > tol:
            raise InvalidArgumentError(f"Los cuadrados de los lados deben sumar 1: {values}")
        if sum(v * v for v in values) > 0.5 + tol:
            raise NotATriangleError(f"No cumple la desigualdad triangular: {values}")
        for name, value in zip(("a2", "b2", "c2"), values):
            object.__setattr__(self, name, float(max(value, 0.0)))

    @classmethod
    def normalized(cls, a2: float, b2: float, c2: float) -> "SquaredSides":
        total = a2 + b2 + c2
        if total <= 0.0:
            raise InvalidArgumentError(f"Los cuadrados de los lados deben tener suma positiva: {(a2, b2, c2)}")
        return cls(a2 / total, b2 / total, c2 / total)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a2, self.b2, self.c2)


@dataclass(frozen=True)
class HemispherePoint:
    """Latitud en [0, pi/2] y longitud en [0, 2 pi) sobre la semiesfera de radio 1/2."""
    latitude: float
    longitude: float

    def __post_init__(self):
        tol = VALIDATION_TOLERANCE
        if not -tol <= self.latitude <= math.pi / 2 + tol:
            raise OutsideDiskError(f"Latitud fuera de [0, pi/2]: {self.latitude}")
        object.__setattr__(self, "latitude", float(min(max(self.latitude, 0.0), math.pi / 2)))
        object.__setattr__(self, "longitude", wrap_angle(float(self.longitude), TWO_PI))


@dataclass(frozen=True)
class DiskPoint:
    """Coordenadas polares (r, phi) sobre el disco de radio 1/2."""
    r: float
    phi: float

    def __post_init__(self):
        tol = VALIDATION_TOLERANCE
        if not -tol <= self.r <= 0.5 + tol:
            raise OutsideDiskError(f"Radio fuera de [0, 1/2]: {self.r}")
        object.__setattr__(self, "r", float(min(max(self.r, 0.0), 0.5)))
        object.__setattr__(self, "phi", wrap_angle(float(self.phi), TWO_PI))

    @property
    def cartesian(self) -> tuple[float, float]:
        return (self.r * math.cos(self.phi), self.r * math.sin(self.phi))


@dataclass(frozen=True)
class UnitQuaternion:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        norm2 = self.alpha ** 2 + self.beta ** 2 + self.gamma ** 2 + self.delta ** 2
        if abs(norm2 - 1.0) > VALIDATION_TOLERANCE:
            raise InvalidQuaternionError(f"El cuaternion no es unitario: |q|^2={norm2}")

    @classmethod
    def normalized(cls, alpha: float, beta: float, gamma: float, delta: float) -> "UnitQuaternion":
        norm = math.sqrt(alpha ** 2 + beta ** 2 + gamma ** 2 + delta ** 2)
        if norm == 0.0:
            raise InvalidQuaternionError("El cuaternion nulo no define una rotacion")
        return cls(alpha / norm, beta / norm, gamma / norm, delta / norm)


@dataclass(frozen=True)
class RoundtripReport:
    """Maxima discrepancia de todos los ciclos de conversion, y el detalle por ciclo."""
    max_discrepancy: float
    cycles: dict[str, float] = field(default_factory=dict)
    sample_count: int = 1

    @property
    def worst_cycle(self) -> str | None:
        if not self.cycles:
            return None
        return max(self.cycles, key=self.cycles.get)
