"""
Pruebas unitarias para angulos, area, familias especiales y la construccion en la semiesfera
"""
import math

import numpy as np
import pytest

from src.repository.models.shape_model import DiskPoint, SquaredSides
from src.service.conversions import disk_to_sides, sides_to_disk
from src.service.geometry import (
    BIG_FRAME,
    LITTLE_FRAME,
    MAX_AREA,
    RIGHT_MAX_AREA,
    angles_from_sides,
    area,
    area_general,
    barycentric_frames,
    construct_in_hemisphere,
    little_coords,
    nearly_singular_radius,
    parallelian_endpoints,
    parallelian_lengths,
    radius_for_area,
    special_triangle,
    special_triangle_expansion,
    three_similar_triangles,
    triangle_inequality_holds,
)
from src.utils.exceptions import InvalidAreaForKindError, InvalidArgumentError, NotATriangleError

SQRT3 = math.sqrt(3.0)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


class TestAnglesAndArea:
    """Pruebas para angulos interiores y formulas de Heron"""

    def test_right_isosceles_angles(self, right_isosceles_sides):
        """Verifica (pi/2, pi/4, pi/4)"""
        angles = angles_from_sides(right_isosceles_sides)

        np.testing.assert_allclose(angles.as_tuple(), (math.pi / 2, math.pi / 4, math.pi / 4), atol=1e-15)
        assert not angles.degenerate

    def test_three_four_five_angles(self, three_four_five_sides):
        """Verifica el angulo recto y sin A = 3/5"""
        angles = angles_from_sides(three_four_five_sides)

        assert angles.C == pytest.approx(math.pi / 2, abs=1e-14)
        assert angles.A == pytest.approx(math.asin(0.6), abs=1e-14)
        assert sum(angles.as_tuple()) == pytest.approx(math.pi, abs=1e-14)

    def test_obtuse_angle(self):
        """Verifica que un lado al cuadrado mayor que 1/2 de un angulo obtuso"""
        angles = angles_from_sides(SquaredSides.normalized(1.0, 1.0, 3.0))

        assert angles.C > math.pi / 2
        assert sum(angles.as_tuple()) == pytest.approx(math.pi, abs=1e-14)

    @pytest.mark.parametrize("sides, expected", [
        ((0.5, 0.5, 0.0), (math.pi / 2, math.pi / 2, 0.0)),
        ((0.0, 0.5, 0.5), (0.0, math.pi / 2, math.pi / 2)),
    ])
    def test_zero_side_angles(self, sides, expected):
        """Verifica el limite simetrico: 0 frente al lado nulo y pi/2 en los otros dos"""
        angles = angles_from_sides(SquaredSides(*sides))

        assert angles.as_tuple() == expected
        assert angles.degenerate

    def test_collinear_angles(self):
        """Verifica pi opuesto al lado mayor de un triangulo colineal 1, 2, 3"""
        angles = angles_from_sides(SquaredSides.normalized(1.0, 4.0, 9.0))

        np.testing.assert_allclose(angles.as_tuple(), (0.0, 0.0, math.pi), atol=1e-6)

    def test_area_values(self, right_isosceles_sides, equilateral_sides):
        """Verifica K = 1/8 para el recto isosceles y 1/sqrt48 para el equilatero"""
        assert area(right_isosceles_sides) == pytest.approx(0.125, abs=1e-15)
        assert area(equilateral_sides) == pytest.approx(MAX_AREA, abs=1e-15)

    def test_area_general(self):
        """Verifica Heron sobre longitudes sin normalizar"""
        assert area_general(3.0, 4.0, 5.0) == pytest.approx(6.0)
        assert area_general(1.0, 2.0, 3.0) == 0.0

    def test_area_general_not_a_triangle(self):
        """Verifica el rechazo de 1, 1, 3"""
        with pytest.raises(NotATriangleError):
            area_general(1.0, 1.0, 3.0)

    def test_area_general_negative_length(self):
        """Verifica el rechazo de longitudes negativas"""
        with pytest.raises(InvalidArgumentError):
            area_general(-1.0, 1.0, 1.0)

    def test_triangle_inequality(self):
        """Verifica la desigualdad triangular incluyendo el caso colineal"""
        assert triangle_inequality_holds(1.0, 2.0, 3.0)
        assert not triangle_inequality_holds(1.0, 1.0, 3.0)

    @pytest.mark.parametrize("lengths", [(1.0, 2.0, 3.0), (3.0, 1.0, 2.0), (0.0, 1.0, 1.0), (2.0, 1.0, 1.0)])
    def test_collinear_reaches_the_rim(self, lengths):
        """Verifica que un triangulo colineal cumpla a^4 + b^4 + c^4 = 1/2 y caiga en r = 1/2"""
        # Arrange
        squares = np.square(lengths)
        sides = SquaredSides.normalized(*squares)

        # Act
        disk = sides_to_disk(sides)

        # Assert
        assert triangle_inequality_holds(*lengths)
        assert sum(x * x for x in sides.as_tuple()) == pytest.approx(0.5, abs=1e-12)
        assert disk.r == pytest.approx(0.5, abs=1e-7)

    def test_inequality_matches_disk_and_quartic_sum(self, rng):
        """Verifica desigualdad triangular <=> sides_to_disk acepta <=> a^4 + b^4 + c^4 <= 1/2 en 10^5 ternas"""
        # Arrange
        lengths = rng.random((100_000, 3))
        squares = lengths ** 2
        normalized = squares / squares.sum(axis=1, keepdims=True)
        quartic = np.sum(normalized ** 2, axis=1)

        # Act
        accepted = []
        for row in normalized:
            try:
                sides_to_disk(SquaredSides(*row))
                accepted.append(True)
            except NotATriangleError:
                accepted.append(False)

        # Assert
        holds = np.array([triangle_inequality_holds(*row) for row in lengths])
        np.testing.assert_array_equal(np.array(accepted), holds)
        np.testing.assert_array_equal(quartic <= 0.5, holds)
        assert 0 < holds.sum() < len(holds)

    def test_area_matches_general_formula(self, random_sides):
        """Verifica que el area normalizada coincida con Heron sobre sqrt de los lados"""
        for row in random_sides[:50]:
            sides = SquaredSides(*row)
            lengths = np.sqrt(row)
            assert area(sides) == pytest.approx(area_general(*lengths), abs=1e-12)


class TestSpecialTriangles:
    """Pruebas para las familias de area fija"""

    @pytest.mark.parametrize("kind, max_area", [
        ("right", RIGHT_MAX_AREA),
        ("isosceles_sharp", MAX_AREA),
        ("isosceles_flat", MAX_AREA),
    ])
    def test_family_has_requested_area(self, kind, max_area):
        """Verifica area K a 1e-10 y lados consistentes con el punto del disco para 100 valores de K"""
        for K in np.linspace(0.0, max_area, 100):
            # Act
            triangle = special_triangle(kind, float(K))

            # Assert
            assert area(triangle.sides) == pytest.approx(K, abs=1e-10)
            np.testing.assert_allclose(
                disk_to_sides(triangle.disk).as_tuple(), triangle.sides.as_tuple(), atol=1e-10
            )

    def test_right_family_has_right_angle(self):
        """Verifica c^2 = 1/2 en ambas ramas"""
        for K in np.linspace(0.0, RIGHT_MAX_AREA, 100):
            positive = special_triangle("right", float(K))
            negative = special_triangle("right", float(K), negative_branch=True)

            assert positive.sides.c2 == 0.5
            assert negative.sides.a2 == pytest.approx(positive.sides.b2, abs=1e-15)
            assert negative.disk.phi == pytest.approx(2 * math.pi - positive.disk.phi, abs=1e-12)

    def test_right_family_largest_area(self):
        """Verifica que K = 1/8 sea el recto isosceles en r = 1/4"""
        triangle = special_triangle("right", RIGHT_MAX_AREA)

        assert triangle.disk.r == pytest.approx(0.25)
        np.testing.assert_allclose(triangle.sides.as_tuple(), (0.25, 0.25, 0.5), atol=1e-15)

    def test_isosceles_sides(self):
        """Verifica lados (1+r)/3, (1+r)/3, (1-2r)/3 y (1+2r)/3, (1-r)/3, (1-r)/3"""
        r = radius_for_area(0.1)

        sharp = special_triangle("isosceles_sharp", 0.1)
        flat = special_triangle("isosceles_flat", 0.1)

        np.testing.assert_allclose(sharp.sides.as_tuple(), ((1 + r) / 3, (1 + r) / 3, (1 - 2 * r) / 3), atol=1e-15)
        np.testing.assert_allclose(flat.sides.as_tuple(), ((1 + 2 * r) / 3, (1 - r) / 3, (1 - r) / 3), atol=1e-15)

    def test_singular_family(self):
        """Verifica longitudes sqrt(2/3)|sin(phi/2)| sobre el ecuador"""
        for phi in np.linspace(0.0, 2 * math.pi, 25, endpoint=False):
            triangle = special_triangle("singular", 0.0, phi=float(phi))

            np.testing.assert_allclose(np.square(triangle.side_lengths), triangle.sides.as_tuple(), atol=1e-15)
            assert area(triangle.sides) == pytest.approx(0.0, abs=1e-6)
            assert triangle.disk.r == 0.5

    def test_singular_at_zero(self):
        """Verifica phi = 0 -> lados sqrt(1/2), sqrt(1/2), 0"""
        triangle = special_triangle("singular", 0.0)

        np.testing.assert_allclose(triangle.side_lengths, (math.sqrt(0.5), math.sqrt(0.5), 0.0), atol=1e-15)

    @pytest.mark.parametrize("kind, K", [
        ("singular", 0.01),
        ("right", 0.13),
        ("isosceles_sharp", 0.2),
        ("isosceles_flat", -0.1),
    ])
    def test_area_outside_family(self, kind, K):
        """Verifica InvalidAreaForKindError fuera del rango de cada familia"""
        with pytest.raises(InvalidAreaForKindError):
            special_triangle(kind, K)

    def test_unknown_family(self):
        """Verifica el rechazo de una familia desconocida"""
        with pytest.raises(InvalidArgumentError):
            special_triangle("scalene", 0.05)

    @pytest.mark.parametrize("kind", ["right", "isosceles_sharp", "isosceles_flat"])
    def test_expansion_is_sixth_order(self, kind):
        """Verifica pendiente log-log 6 del error de la serie en K pequeno"""
        def error(K):
            exact = special_triangle(kind, K).sides.as_tuple()
            return max(abs(e - s) for e, s in zip(exact, special_triangle_expansion(kind, K)))

        slope = math.log2(error(0.02) / error(0.01))

        assert 5.8 < slope < 6.2

    def test_right_expansion_small_side(self):
        """Verifica el lado pequeno 8K^2 + 128K^4 en K = 0.01"""
        triangle = special_triangle("right", 0.01)

        assert triangle.sides.b2 == pytest.approx(8e-4 + 128e-8, abs=1e-8)

    def test_nearly_singular_radius(self):
        """Verifica r = 1/2 - 12K^2 - 144K^4 cerca del ecuador"""
        assert nearly_singular_radius(0.01) == pytest.approx(radius_for_area(0.01), abs=1e-8)

    def test_radius_for_area_limits(self):
        """Verifica r = 1/2 con K = 0, r = 0 con el area maxima y el rechazo fuera de rango"""
        assert radius_for_area(0.0) == 0.5
        assert radius_for_area(MAX_AREA) == pytest.approx(0.0, abs=1e-7)
        with pytest.raises(InvalidAreaForKindError):
            radius_for_area(0.2)


class TestParallelians:
    """Pruebas para los paralelianos por P"""

    def test_frames(self):
        """Verifica Delta_little = -Delta_big/2 y aristas grandes de longitud sqrt3"""
        frames = barycentric_frames()

        np.testing.assert_allclose(frames.little, -0.5 * frames.big)
        assert np.linalg.norm(frames.big[:, 0] - frames.big[:, 1]) == pytest.approx(SQRT3)

    def test_little_coords(self, right_isosceles_sides):
        """Verifica (0, 1/2, 1/2) para el recto y un vertice para el degenerado"""
        assert little_coords(right_isosceles_sides) == (0.0, 0.5, 0.5)
        assert little_coords(SquaredSides(0.5, 0.5, 0.0)) == (0.0, 0.0, 1.0)

    def test_right_isosceles_first_parallelian(self, right_isosceles_sides):
        """Verifica los extremos (1/2, 1/2, 0) y (1/2, 0, 1/2)"""
        first = parallelian_endpoints(right_isosceles_sides)[0]

        assert first.big_endpoints == ((0.5, 0.5, 0.0), (0.5, 0.0, 0.5))

    def test_equilateral_through_centroid(self, equilateral_sides):
        """Verifica longitudes iguales sqrt3/3 partidas por el centro en mitades"""
        for parallelian in parallelian_endpoints(equilateral_sides):
            assert parallelian.length == pytest.approx(SQRT3 / 3)
            np.testing.assert_allclose(parallelian.pieces, (SQRT3 / 6, SQRT3 / 6), atol=1e-15)

    def test_lengths(self, three_four_five_sides):
        """Verifica longitudes sqrt3 por cada lado al cuadrado"""
        lengths = parallelian_lengths(three_four_five_sides)

        np.testing.assert_allclose(lengths, SQRT3 * np.array([0.18, 0.32, 0.5]), atol=1e-15)

    def test_both_frames_agree(self, random_sides):
        """Verifica que los extremos en ambos marcos den el mismo punto cartesiano"""
        for row in random_sides:
            for parallelian in parallelian_endpoints(SquaredSides(*row)):
                for big, little, point in zip(
                    parallelian.big_endpoints, parallelian.little_endpoints, parallelian.cartesian_endpoints
                ):
                    np.testing.assert_allclose(BIG_FRAME @ np.array(big), point, atol=1e-12)
                    np.testing.assert_allclose(LITTLE_FRAME @ np.array(little), point, atol=1e-12)

    def test_parallel_to_little_sides(self, random_sides):
        """Verifica que el paraleliano k sea paralelo al lado k del triangulo pequeno"""
        for row in random_sides:
            for index, parallelian in enumerate(parallelian_endpoints(SquaredSides(*row))):
                segment = parallelian.cartesian_endpoints[0] - parallelian.cartesian_endpoints[1]
                side = LITTLE_FRAME[:, (index + 1) % 3] - LITTLE_FRAME[:, (index + 2) % 3]
                assert abs(_cross(segment, side)) < 1e-12

    def test_pieces(self, random_sides):
        """Verifica tramos con signo (sqrt3/2)(1 - 2x^2) que suman la longitud"""
        for row in random_sides:
            for index, parallelian in enumerate(parallelian_endpoints(SquaredSides(*row))):
                others = [row[j] for j in range(3) if j != index]
                expected = sorted(SQRT3 / 2 * (1 - 2 * x) for x in others)

                assert sum(parallelian.pieces) == pytest.approx(parallelian.length, abs=1e-12)
                np.testing.assert_allclose(sorted(parallelian.pieces), expected, atol=1e-12)


class TestHemisphereConstruction:
    """Pruebas para la construccion del triangulo semejante dentro de la semiesfera"""

    def test_three_four_five(self, three_four_five_sides):
        """Verifica SY = sqrt3 ac, SX = sqrt3 bc, XY = sqrt3 c^2 y razones 3:4:5"""
        # Act
        result = construct_in_hemisphere(three_four_five_sides)

        # Assert
        triangle = result.triangles[2]
        np.testing.assert_allclose(triangle.sides, SQRT3 * np.array([0.3, 0.4, 0.5]), atol=1e-12)
        assert result.max_ratio_residual < 1e-10
        assert result.max_altitude_residual < 1e-10
        assert result.height == pytest.approx(2 * SQRT3 * 0.12, abs=1e-12)
        assert not result.degenerate

    def test_equilateral_pole(self, equilateral_sides):
        """Verifica SP = 1/2 y XY = sqrt3/3"""
        result = construct_in_hemisphere(equilateral_sides)

        assert result.height == pytest.approx(0.5, abs=1e-15)
        np.testing.assert_allclose(result.P, (0.0, 0.0, 0.0), atol=1e-15)
        for triangle in result.triangles:
            assert triangle.sides[2] == pytest.approx(SQRT3 / 3)

    def test_right_isosceles_ratios(self, right_isosceles_sides):
        """Verifica SY:SX:XY = a:b:c"""
        result = construct_in_hemisphere(right_isosceles_sides)

        assert result.max_ratio_residual < 1e-10

    def test_lifted_point_on_hemisphere(self, random_sides):
        """Verifica |S| = 1/2 y S sobre P"""
        for row in random_sides[:50]:
            result = construct_in_hemisphere(SquaredSides(*row))

            assert np.linalg.norm(result.S) == pytest.approx(0.5, abs=1e-14)
            np.testing.assert_allclose(result.S[:2], result.P[:2])

    def test_three_similar_triangles(self, rng):
        """Verifica razones a:b:c a 1e-9 y SP altura comun para 1000 formas aleatorias"""
        # Arrange
        vertices = rng.standard_normal((1000, 2, 3))
        edges = vertices - np.roll(vertices, 1, axis=2)
        sides = np.sum(edges ** 2, axis=1)
        sides /= sides.sum(axis=1, keepdims=True)

        for row in sides:
            # Act
            triangles = three_similar_triangles(SquaredSides(*row))

            # Assert
            for triangle in triangles:
                assert triangle.ratio_residual < 1e-9
                assert triangle.altitude_residual < 1e-10

    def test_degenerate_is_flagged(self):
        """Verifica que un triangulo con un lado nulo quede en el ecuador sin error"""
        result = construct_in_hemisphere(SquaredSides(0.5, 0.5, 0.0))

        assert result.degenerate
        assert result.height == pytest.approx(0.0, abs=1e-15)
        assert all(math.isnan(t.ratio_residual) for t in result.triangles)

