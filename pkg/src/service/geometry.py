"""
Geometria del espacio de triangulos: angulos, area, familias de area fija,
paralelianos y la construccion dentro de la semiesfera.
"""
import math

import numpy as np

from src.repository.models.geometry_model import (
    BarycentricFrames,
    ConstructionResult,
    HemisphereTriangle,
    Parallelian,
    SpecialTriangle,
    TriangleAngles,
)
from src.repository.models.shape_model import DiskPoint, SquaredSides
from src.service.conversions import disk_to_sides
from src.utils.environment import VALIDATION_TOLERANCE
from src.utils.exceptions import InvalidAreaForKindError, InvalidArgumentError, NotATriangleError

SQRT3 = math.sqrt(3.0)
MAX_AREA = 1.0 / math.sqrt(48.0)
RIGHT_MAX_AREA = 0.125
DEGENERATE_AREA = 1e-14
RADICAND_TOLERANCE = 1e-12

SPECIAL_KINDS = ("right", "isosceles_sharp", "isosceles_flat", "singular")

BIG_FRAME = np.array([
    [SQRT3 / 2.0, -SQRT3 / 2.0, 0.0],
    [0.5, 0.5, -1.0],
])
LITTLE_FRAME = -0.5 * BIG_FRAME


def area(s: SquaredSides) -> float:
    """Formula de Heron normalizada: K = sqrt(1 - 2 (a^4 + b^4 + c^4)) / 4."""
    radicand = 1.0 - 2.0 * (s.a2 ** 2 + s.b2 ** 2 + s.c2 ** 2)
    if radicand < -RADICAND_TOLERANCE:
        raise NotATriangleError(f"Radicando de Heron negativo: {radicand}")
    return 0.25 * math.sqrt(max(radicand, 0.0))


def area_general(a: float, b: float, c: float) -> float:
    """16 K^2 = (a+b+c)(-a+b+c)(a-b+c)(a+b-c) sobre longitudes sin normalizar."""
    if min(a, b, c) < 0.0:
        raise InvalidArgumentError(f"Longitudes negativas: {(a, b, c)}")
    radicand = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    scale = max(a, b, c) ** 4
    if radicand < -RADICAND_TOLERANCE * max(scale, 1.0):
        raise NotATriangleError(f"No cumple la desigualdad triangular: {(a, b, c)}")
    return 0.25 * math.sqrt(max(radicand, 0.0))


def triangle_inequality_holds(a: float, b: float, c: float) -> bool:
    return a <= b + c and b <= a + c and c <= a + b


def angles_from_sides(s: SquaredSides, K: float | None = None) -> TriangleAngles:
    """
    tan A = 4K / (1 - 2 a^2), evaluado con atan2 para que los angulos obtusos
    queden en (pi/2, pi).

    Convencion para area nula:
      - lados positivos (colineal): pi frente al lado mayor y 0 en los otros dos;
      - un lado nulo: 0 frente a ese lado y pi/2 en los otros dos, el limite
        simetrico de triangulos isosceles que se aplastan (no el patron 0, 0, pi).
    En ambos casos degenerate es True.
    """
    if K is None:
        K = area(s)
    sides = s.as_tuple()
    if K < DEGENERATE_AREA and min(sides) <= VALIDATION_TOLERANCE:
        zero_side = int(np.argmin(sides))
        angles = [math.pi / 2.0] * 3
        angles[zero_side] = 0.0
        return TriangleAngles(*angles, degenerate=True)
    angles = [math.atan2(4.0 * K, 1.0 - 2.0 * x) for x in sides]
    return TriangleAngles(*angles, degenerate=K < DEGENERATE_AREA)


def radius_for_area(K: float) -> float:
    """Circulo de area fija en el disco: r = sqrt(1 - 48 K^2) / 2."""
    if not -VALIDATION_TOLERANCE <= K <= MAX_AREA + VALIDATION_TOLERANCE:
        raise InvalidAreaForKindError(f"El area debe estar en [0, 1/sqrt(48)]: {K}")
    return 0.5 * math.sqrt(max(1.0 - 48.0 * K * K, 0.0))


def _one_minus_sqrt(x: float) -> float:
    """1 - sqrt(1 - x) sin cancelacion."""
    return x / (1.0 + math.sqrt(max(1.0 - x, 0.0)))


def special_triangle(kind: str, K: float, phi: float = 0.0, negative_branch: bool = False) -> SpecialTriangle:
    """
    Miembro de una familia de area K.

    - right: c^2 = 1/2 en phi = acos(-1/(4r)) (rama negativa con negative_branch)
    - isosceles_sharp: phi = 0, lados (1+r)/3, (1+r)/3, (1-2r)/3
    - isosceles_flat: phi = pi/3, lados (1+2r)/3, (1-r)/3, (1-r)/3
    - singular: K = 0, r = 1/2 y phi libre
    """
    if kind not in SPECIAL_KINDS:
        raise InvalidArgumentError(f"Familia desconocida: {kind}")
    if K < -VALIDATION_TOLERANCE:
        raise InvalidAreaForKindError(f"Area negativa: {K}")
    K = max(K, 0.0)

    if kind == "singular":
        if K > VALIDATION_TOLERANCE:
            raise InvalidAreaForKindError(f"Los triangulos singulares tienen area 0: {K}")
        disk = DiskPoint(0.5, phi)
        sides = disk_to_sides(disk)
        lengths = tuple(
            math.sqrt(2.0 / 3.0) * abs(math.sin(angle / 2.0))
            for angle in (disk.phi + 2.0 * math.pi / 3.0, disk.phi - 2.0 * math.pi / 3.0, disk.phi)
        )
        return SpecialTriangle(kind, 0.0, disk, sides, lengths)

    if kind == "right":
        if K > RIGHT_MAX_AREA + VALIDATION_TOLERANCE:
            raise InvalidAreaForKindError(f"Un triangulo recto normalizado tiene K <= 1/8: {K}")
        K = min(K, RIGHT_MAX_AREA)
        r = radius_for_area(K)
        angle = math.acos(max(-1.0, -1.0 / (4.0 * r)))
        small = 0.25 * _one_minus_sqrt(64.0 * K * K)
        large = 0.5 - small
        a2, b2 = (small, large) if negative_branch else (large, small)
        disk = DiskPoint(r, -angle if negative_branch else angle)
        sides = SquaredSides(a2, b2, 0.5)
    else:
        if K > MAX_AREA + VALIDATION_TOLERANCE:
            raise InvalidAreaForKindError(f"El area maxima es 1/sqrt(48): {K}")
        r = radius_for_area(min(K, MAX_AREA))
        tiny = _one_minus_sqrt(48.0 * K * K) / 3.0
        if kind == "isosceles_sharp":
            disk = DiskPoint(r, 0.0)
            sides = SquaredSides((1.0 + r) / 3.0, (1.0 + r) / 3.0, tiny)
        else:
            disk = DiskPoint(r, math.pi / 3.0)
            sides = SquaredSides((1.0 + 2.0 * r) / 3.0, (1.0 - r) / 3.0, (1.0 - r) / 3.0)

    lengths = tuple(math.sqrt(x) for x in sides.as_tuple())
    return SpecialTriangle(kind, K, disk, sides, lengths)


def special_triangle_expansion(kind: str, K: float) -> tuple[float, float, float]:
    """Serie en K pequeno de los lados al cuadrado, en el orden de special_triangle."""
    k2, k4 = K * K, K ** 4
    if kind == "right":
        return (0.5 - 8.0 * k2 - 128.0 * k4, 8.0 * k2 + 128.0 * k4, 0.5)
    if kind == "isosceles_sharp":
        equal = 0.5 - 4.0 * k2 - 48.0 * k4
        return (equal, equal, 8.0 * k2 + 96.0 * k4)
    if kind == "isosceles_flat":
        equal = 1.0 / 6.0 + 4.0 * k2 + 48.0 * k4
        return (2.0 / 3.0 - 8.0 * k2 - 96.0 * k4, equal, equal)
    raise InvalidArgumentError(f"Sin expansion para la familia: {kind}")


def nearly_singular_radius(K: float) -> float:
    """r = 1/2 - 12 K^2 - 144 K^4 + O(K^6)."""
    return 0.5 - 12.0 * K * K - 144.0 * K ** 4


def barycentric_frames() -> BarycentricFrames:
    return BarycentricFrames(big=BIG_FRAME, little=LITTLE_FRAME)


def little_coords(s: SquaredSides) -> tuple[float, float, float]:
    return (1.0 - 2.0 * s.a2, 1.0 - 2.0 * s.b2, 1.0 - 2.0 * s.c2)


def _endpoint_table(s: SquaredSides):
    a2, b2, c2 = s.as_tuple()
    big = (
        ((a2, 0.5, 0.5 - a2), (a2, 0.5 - a2, 0.5)),
        ((0.5, b2, 0.5 - b2), (0.5 - b2, b2, 0.5)),
        ((0.5, 0.5 - c2, c2), (0.5 - c2, 0.5, c2)),
    )
    little = (
        ((1.0 - 2.0 * a2, 0.0, 2.0 * a2), (1.0 - 2.0 * a2, 2.0 * a2, 0.0)),
        ((0.0, 1.0 - 2.0 * b2, 2.0 * b2), (2.0 * b2, 1.0 - 2.0 * b2, 0.0)),
        ((0.0, 2.0 * c2, 1.0 - 2.0 * c2), (2.0 * c2, 0.0, 1.0 - 2.0 * c2)),
    )
    return big, little


def parallelian_endpoints(s: SquaredSides) -> tuple[Parallelian, Parallelian, Parallelian]:
    """
    Los tres paralelianos por P en coordenadas baricentricas de ambos marcos.

    El paraleliano k tiene longitud sqrt(3) por el lado k al cuadrado; P lo
    divide en dos tramos con signo (negativos si P queda fuera del triangulo
    pequeno).
    """
    big, little = _endpoint_table(s)
    p = BIG_FRAME @ np.array(s.as_tuple())
    parallelians = []
    for index in range(3):
        first = BIG_FRAME @ np.array(big[index][0])
        second = BIG_FRAME @ np.array(big[index][1])
        segment = first - second
        length = float(np.linalg.norm(segment))
        if length > 0.0:
            direction = segment / length
            pieces = (float((first - p) @ direction), float((p - second) @ direction))
        else:
            pieces = (0.0, 0.0)
        parallelians.append(Parallelian(
            index=index + 1,
            big_endpoints=big[index],
            little_endpoints=little[index],
            cartesian_endpoints=np.stack([first, second]),
            length=length,
            pieces=pieces,
        ))
    return tuple(parallelians)


def parallelian_lengths(s: SquaredSides) -> tuple[float, float, float]:
    return tuple(p.length for p in parallelian_endpoints(s))


def _lifted_point(s: SquaredSides) -> tuple[np.ndarray, np.ndarray]:
    p2 = BIG_FRAME @ np.array(s.as_tuple())
    h = math.sqrt(max(0.25 - float(p2 @ p2), 0.0))
    return np.array([p2[0], p2[1], h]), np.array([p2[0], p2[1], 0.0])


def _triangle_over(parallelian: Parallelian, S: np.ndarray, P: np.ndarray, side_lengths: np.ndarray) -> HemisphereTriangle:
    X = np.append(parallelian.cartesian_endpoints[0], 0.0)
    Y = np.append(parallelian.cartesian_endpoints[1], 0.0)
    sides = (float(np.linalg.norm(S - Y)), float(np.linalg.norm(S - X)), float(np.linalg.norm(X - Y)))

    if np.all(side_lengths > 0.0):
        ratios = np.sort(sides) / np.sort(side_lengths)
        ratio_residual = float(np.max(np.abs(ratios / ratios.mean() - 1.0)))
    else:
        ratio_residual = math.nan

    base = Y[:2] - X[:2]
    base_length = float(np.linalg.norm(base))
    if base_length > 0.0:
        offset = P[:2] - X[:2]
        altitude_residual = abs(float(base[0] * offset[1] - base[1] * offset[0])) / base_length
    else:
        altitude_residual = math.nan

    return HemisphereTriangle(
        parallelian=parallelian.index,
        vertices=np.stack([S, X, Y]),
        sides=sides,
        ratio_residual=ratio_residual,
        altitude_residual=altitude_residual,
    )


def three_similar_triangles(s: SquaredSides) -> tuple[HemisphereTriangle, HemisphereTriangle, HemisphereTriangle]:
    """Un triangulo S X Y por cada paraleliano; los tres comparten la altura SP."""
    S, P = _lifted_point(s)
    lengths = np.sqrt(np.array(s.as_tuple()))
    return tuple(_triangle_over(p, S, P, lengths) for p in parallelian_endpoints(s))


def construct_in_hemisphere(s: SquaredSides) -> ConstructionResult:
    """
    [P X Y] = Delta_big [[a2, 1/2, 1/2 - c2], [b2, 1/2 - c2, 1/2], [c2, c2, c2]] y
    S = (P, sqrt(1/4 - |P|^2)); SY = sqrt3 ac, SX = sqrt3 bc, XY = sqrt3 c^2.
    """
    S, P = _lifted_point(s)
    parallelians = parallelian_endpoints(s)
    lengths = np.sqrt(np.array(s.as_tuple()))
    triangles = tuple(_triangle_over(p, S, P, lengths) for p in parallelians)
    return ConstructionResult(
        sides=s,
        S=S,
        P=P,
        height=float(S[2]),
        parallelians=parallelians,
        triangles=triangles,
        degenerate=area(s) < DEGENERATE_AREA,
    )
