from dataclasses import dataclass, field

import numpy as np

from src.repository.models.frame_model import frozen_array
from src.utils.environment import VALIDATION_TOLERANCE
from src.utils.exceptions import InvalidArgumentError, InvalidShapeMatrixError


@dataclass(frozen=True, eq=False)
class PreShape:
    """Matriz m x (k-1) de norma de Frobenius 1: configuracion de k puntos en R^m sin traslacion ni escala."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] < 1 or entries.shape[1] < 1:
            raise InvalidArgumentError(f"Una preforma es una matriz m x (k-1): {entries.shape}")
        norm = float(np.sqrt(np.sum(entries ** 2)))
        if abs(norm - 1.0) > VALIDATION_TOLERANCE:
            raise InvalidShapeMatrixError(f"La preforma debe tener norma 1: {norm}")
        object.__setattr__(self, "entries", frozen_array(entries))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1] + 1


@dataclass(frozen=True)
class TestReport:
    """Estadistico, distribucion de referencia y p-valor de una prueba de bondad de ajuste."""
    __test__ = False

    name: str
    statistic: float
    reference: str
    p_value: float
    sample_count: int

    def __post_init__(self):
        object.__setattr__(self, "p_value", float(min(max(self.p_value, 0.0), 1.0)))

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha


@dataclass(frozen=True)
class SuiteReport:
    reports: dict[str, TestReport] = field(default_factory=dict)

    def rejects(self, alpha: float) -> bool:
        return any(report.rejects(alpha) for report in self.reports.values())

    @property
    def min_p_value(self) -> float:
        return min((r.p_value for r in self.reports.values()), default=1.0)
