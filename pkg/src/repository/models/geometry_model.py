from dataclasses import dataclass

import numpy as np

from src.repository.models.frame_model import frozen_array
from src.repository.models.shape_model import DiskPoint, SquaredSides


@dataclass(frozen=True)
class TriangleAngles:
    """Angulos interiores (A, B, C) en radianes, opuestos a los lados a, b, c."""
    A: float
    B: float
    C: float
    degenerate: bool = False

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.A, self.B, self.C)


@dataclass(frozen=True, eq=False)
class BarycentricFrames:
    """Triangulo grande (aristas de longitud sqrt(3)) y pequeno invertido, Delta_little = -Delta_big / 2."""
    big: np.ndarray
    little: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "big", frozen_array(self.big, (2, 3)))
        object.__setattr__(self, "little", frozen_array(self.little, (2, 3)))


@dataclass(frozen=True, eq=False)
class Parallelian:
    """Segmento por P paralelo a un lado del triangulo pequeno."""
    index: int
    big_endpoints: tuple[tuple[float, float, float], tuple[float, float, float]]
    little_endpoints: tuple[tuple[float, float, float], tuple[float, float, float]]
    cartesian_endpoints: np.ndarray
    length: float
    pieces: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "cartesian_endpoints", frozen_array(self.cartesian_endpoints, (2, 2)))


@dataclass(frozen=True, eq=False)
class HemisphereTriangle:
    """Triangulo S, X, Y levantado sobre un paraleliano; sides = (SY, SX, XY)."""
    parallelian: int
    vertices: np.ndarray
    sides: tuple[float, float, float]
    ratio_residual: float
    altitude_residual: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozen_array(self.vertices, (3, 3)))


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    sides: SquaredSides
    S: np.ndarray
    P: np.ndarray
    height: float
    parallelians: tuple[Parallelian, Parallelian, Parallelian]
    triangles: tuple[HemisphereTriangle, HemisphereTriangle, HemisphereTriangle]
    degenerate: bool

    def __post_init__(self):
        object.__setattr__(self, "S", frozen_array(self.S, (3,)))
        object.__setattr__(self, "P", frozen_array(self.P, (3,)))

    @property
    def X(self) -> np.ndarray:
        return self.triangles[2].vertices[1]

    @property
    def Y(self) -> np.ndarray:
        return self.triangles[2].vertices[2]

    @property
    def max_ratio_residual(self) -> float:
        return max(t.ratio_residual for t in self.triangles)

    @property
    def max_altitude_residual(self) -> float:
        return max(t.altitude_residual for t in self.triangles)


@dataclass(frozen=True)
class SpecialTriangle:
    """Miembro de una familia de area fija (recto, isosceles agudo/obtuso, singular)."""
    kind: str
    area: float
    disk: DiskPoint
    sides: SquaredSides
    side_lengths: tuple[float, float, float]
