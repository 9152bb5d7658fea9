import math
from dataclasses import dataclass

import numpy as np

from src.repository.models.shape_model import DiskPoint, SquaredSides
from src.utils.environment import VALIDATION_TOLERANCE
from src.utils.exceptions import InvalidArgumentError

ACUTE = "acute"
RIGHT = "right"
OBTUSE = "obtuse"
TRIANGLE_CLASSES = (ACUTE, RIGHT, OBTUSE)

_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class RngSeed:
    """Semilla de 64 bits mas identificador de stream; cada chunk deriva un PCG64 independiente."""
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= _MAX_SEED:
            raise InvalidArgumentError(f"La semilla debe ser un entero sin signo de 64 bits: {self.seed}")
        if self.stream < 0:
            raise InvalidArgumentError(f"El stream debe ser no negativo: {self.stream}")

    def generator(self, chunk: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, chunk))
        return np.random.Generator(np.random.PCG64(sequence))


@dataclass(frozen=True)
class ClassifiedShape:
    sides: SquaredSides
    triangle_class: str
    disk: DiskPoint


@dataclass(frozen=True)
class SimplexAngles:
    """Angulos divididos por pi; suman 1."""
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        values = (self.alpha, self.beta, self.gamma)
        if min(values) < -VALIDATION_TOLERANCE or abs(sum(values) - 1.0) > VALIDATION_TOLERANCE:
            raise InvalidArgumentError(f"Los angulos deben estar en el simplex: {values}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def is_obtuse(self) -> bool:
        return max(self.as_tuple()) > 0.5


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Fraccion estimada con su error estandar binomial."""
    successes: int
    n_samples: int

    @property
    def value(self) -> float:
        return self.successes / self.n_samples

    @property
    def standard_error(self) -> float:
        p = self.value
        return math.sqrt(p * (1.0 - p) / self.n_samples)

    def within(self, target: float, n_errors: float = 3.0) -> bool:
        return abs(self.value - target) <= n_errors * max(self.standard_error, 1.0 / self.n_samples)
