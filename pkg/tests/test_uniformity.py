"""
Pruebas unitarias para las pruebas de uniformidad sobre preformas
"""
import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy import integrate, stats

from src.repository.models.uniformity_model import PreShape
from src.service.conversions import matrix_to_hemisphere_array
from src.service.sampling import sample_preshapes
from src.service.uniformity import (
    as_preshape_array,
    as_preshapes,
    chi2_upper_tail,
    chi_square_test,
    chikuse_jupp,
    chikuse_jupp_df,
    equilateral_point_mass,
    height_longitude_correlations,
    height_longitude_independence,
    inv_sigma_min_cdf,
    inv_sigma_min_density,
    inverse_smallest_singular_values,
    kolmogorov_p_value,
    ks_test,
    sigma_min_test,
    uniformity_suite,
)
from src.utils.exceptions import EmptySampleSetError, InvalidArgumentError, InvalidSampleSetError


def _point_mass(z, t):
    return np.repeat(np.asarray(z, dtype=float)[None], t, axis=0)


class TestSampleValidation:
    """Pruebas para la validacion del conjunto de muestras"""

    def test_accepts_preshape_list(self):
        """Verifica que una lista de PreShape se apile en un arreglo t x m x (k-1)"""
        samples = as_preshapes(sample_preshapes(3, 4, 10, seed=1))

        array = as_preshape_array(samples)

        assert array.shape == (10, 3, 3)

    def test_empty_list(self):
        with pytest.raises(EmptySampleSetError):
            as_preshape_array([])

    def test_mixed_dimensions(self):
        """Verifica el rechazo de muestras con distinto (m, k)"""
        samples = [PreShape(np.eye(2) / math.sqrt(2)), PreShape(np.ones((3, 2)) / math.sqrt(6))]

        with pytest.raises(InvalidSampleSetError):
            as_preshape_array(samples)

    def test_non_unit_norm(self):
        with pytest.raises(InvalidSampleSetError):
            as_preshape_array(np.ones((4, 2, 2)))


class TestChikuseJupp:
    """Pruebas para el estadistico de Chikuse-Jupp"""

    def test_degrees_of_freedom(self):
        """Verifica (k-2)(k+1)/2"""
        assert chikuse_jupp_df(2) == 0
        assert chikuse_jupp_df(3) == 2
        assert chikuse_jupp_df(5) == 9

    def test_zero_at_equilateral(self):
        """Verifica S = 0 cuando Z^T Z = I/(k-1)"""
        report = chikuse_jupp(equilateral_point_mass(100))

        assert report.statistic == pytest.approx(0.0, abs=1e-12)
        assert report.p_value == pytest.approx(1.0)
        assert report.reference == "chi2(df=2)"

    def test_two_points_is_trivial(self):
        """Verifica que con k = 2 el estadistico sea 0 y el p-valor 1"""
        report = chikuse_jupp(sample_preshapes(3, 2, 50, seed=4))

        assert report.statistic == pytest.approx(0.0, abs=1e-12)
        assert report.p_value == 1.0

    def test_rejects_non_equilateral_point_mass(self):
        """Verifica p < 1e-6 para una masa puntual en una forma no equilatera"""
        z = np.diag([math.sqrt(0.8), math.sqrt(0.2)])

        report = chikuse_jupp(_point_mass(z, 1000))

        assert report.statistic == pytest.approx(1080.0)
        assert report.p_value < 1e-6

    @pytest.mark.parametrize("m, k", [(2, 3), (3, 4), (4, 6)])
    def test_rotation_invariant(self, m, k):
        """Verifica que rotar cada preforma por una misma matriz ortogonal no cambie S"""
        # Arrange
        samples = sample_preshapes(m, k, 500, seed=m + k)
        rotation = stats.ortho_group.rvs(dim=m, random_state=11)

        # Act
        original = chikuse_jupp(samples)
        rotated = chikuse_jupp(rotation @ samples)

        # Assert
        assert rotated.statistic == pytest.approx(original.statistic, rel=1e-12, abs=1e-12)
        assert rotated.p_value == pytest.approx(original.p_value, rel=1e-10, abs=1e-12)

    def test_null_mean(self):
        """Verifica que la media de S bajo uniformidad sea df = 2 con tolerancia del 5%"""
        # Arrange
        replications, t = 4000, 250
        samples = sample_preshapes(2, 3, replications * t, seed=99).reshape(replications, t, 2, 2)

        # Act
        statistics = [chikuse_jupp(batch).statistic for batch in samples]

        # Assert
        assert np.mean(statistics) == pytest.approx(2.0, rel=0.05)

    def test_chi2_upper_tail(self):
        """Verifica Q(df/2, x/2) contra scipy.stats.chi2"""
        assert chi2_upper_tail(2.0, 2) == pytest.approx(math.exp(-1.0))
        for x, df in [(0.5, 1), (7.3, 5), (30.0, 9)]:
            assert chi2_upper_tail(x, df) == pytest.approx(stats.chi2.sf(x, df), rel=1e-12)

    @pytest.mark.parametrize("x, df", [(-1.0, 2), (1.0, 0), (math.nan, 2)])
    def test_chi2_invalid(self, x, df):
        with pytest.raises(InvalidArgumentError):
            chi2_upper_tail(x, df)


class TestSigmaMin:
    """Pruebas para 1/sigma_min"""

    def test_density_integrates_to_one(self):
        """Verifica que la densidad con m = 2 integre 1 a 1e-6"""
        total, _ = integrate.quad(lambda x: inv_sigma_min_density(x, 2), math.sqrt(2), np.inf, limit=200)

        assert total == pytest.approx(1.0, abs=1e-6)

    def test_cdf_matches_density(self):
        """Verifica que la forma cerrada de la CDF sea la integral de la densidad"""
        for x in (1.5, 2.0, 3.0, 10.0):
            partial, _ = integrate.quad(lambda s: inv_sigma_min_density(s, 2), math.sqrt(2), x)
            assert inv_sigma_min_cdf(x, 2) == pytest.approx(partial, abs=1e-9)

    def test_support(self):
        """Verifica densidad nula y CDF 0 por debajo de sqrt(m)"""
        assert inv_sigma_min_density(1.2, 2) == 0.0
        assert inv_sigma_min_cdf(1.0, 2) == 0.0
        assert inv_sigma_min_cdf(math.inf, 2) == 1.0

    def test_table_cdf_for_larger_m(self):
        """Verifica una CDF tabulada monotona entre 0 y 1 para m = 3"""
        x = np.linspace(1.8, 40.0, 50)

        values = inv_sigma_min_cdf(x, 3)

        assert np.all(np.diff(values) >= 0.0)
        assert inv_sigma_min_cdf(math.sqrt(3), 3) == 0.0
        assert inv_sigma_min_cdf(math.inf, 3) == 1.0

    def test_invalid_order(self):
        with pytest.raises(InvalidArgumentError):
            inv_sigma_min_density(2.0, 1)

    def test_sample_histogram_matches_density(self):
        """Verifica chi^2 en 40 bins de 10^5 muestras gaussianas 2x2 contra la CDF"""
        # Arrange
        values = inverse_smallest_singular_values(sample_preshapes(2, 3, 100_000, seed=17))
        probabilities = np.linspace(0.0, 1.0, 41)
        edges = np.empty(41)
        edges[0], edges[-1] = math.sqrt(2), np.inf
        # cuantiles exactos de la CDF cerrada: u = 1 - 2 sqrt(x^2 - 1) / x^2
        for i, p in enumerate(probabilities[1:-1], start=1):
            w = (1.0 - p) / 2.0
            edges[i] = math.sqrt((1.0 + math.sqrt(1.0 - 4.0 * w * w)) / (2.0 * w * w))
        counts, _ = np.histogram(values, bins=edges)

        # Act
        report = chi_square_test(counts, np.full(40, 1 / 40))

        # Assert
        np.testing.assert_allclose(inv_sigma_min_cdf(edges[1:-1], 2), probabilities[1:-1], atol=1e-12)
        assert report.p_value > 0.001

    def test_equilateral_point_mass_rejected(self):
        """Verifica p < 1e-6 para la masa puntual equilatera (todo en el borde del soporte)"""
        report = sigma_min_test(equilateral_point_mass(1000))

        assert report.statistic == pytest.approx(1.0)
        assert report.p_value < 1e-6

    @patch("src.service.uniformity.SIGMA_MIN_NULL_DRAWS", 5000)
    def test_rectangular_uses_simulated_null(self):
        """Verifica el KS de dos muestras cuando Z no es cuadrada"""
        report = sigma_min_test(sample_preshapes(3, 3, 2000, seed=23), seed=5)

        assert report.reference == "nulo simulado"
        assert report.p_value > 0.001

    def test_no_test_for_vectors(self):
        """Verifica que con m = 1 no haya prueba de sigma_min"""
        assert sigma_min_test(sample_preshapes(1, 4, 10, seed=1)) is None


class TestGoodnessOfFit:
    """Pruebas para KS y chi^2"""

    def test_ks_statistic_matches_scipy(self, rng):
        """Verifica el estadistico D contra scipy.stats.kstest"""
        samples = rng.random(500)

        report = ks_test(samples, lambda x: np.clip(x, 0.0, 1.0))

        assert report.statistic == pytest.approx(stats.kstest(samples, "uniform").statistic, abs=1e-15)
        assert report.sample_count == 500

    def test_ks_rejects_shifted(self, rng):
        """Verifica que una muestra desplazada se rechace"""
        samples = 0.5 * rng.random(2000) + 0.5

        report = ks_test(samples, lambda x: np.clip(x, 0.0, 1.0))

        assert report.p_value < 1e-6

    def test_kolmogorov_p_value(self):
        assert kolmogorov_p_value(0.0, 100) == 1.0
        assert kolmogorov_p_value(1.0, 100) < 1e-12

    def test_ks_empty(self):
        with pytest.raises(EmptySampleSetError):
            ks_test([], lambda x: x)

    def test_chi_square_perfect_fit(self):
        report = chi_square_test([25, 25, 25, 25], [0.25] * 4)
        assert report.statistic == 0.0
        assert report.p_value == pytest.approx(1.0)

    def test_chi_square_zero_probability_cell(self):
        """Verifica p-valor 0 si hay conteos en una celda de probabilidad nula"""
        report = chi_square_test([10, 5, 1], [0.5, 0.5, 0.0])

        assert report.p_value == 0.0

    def test_chi_square_shape_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            chi_square_test([1, 2, 3], [0.5, 0.5])


class TestHemisphereMarginals:
    """Pruebas para las marginales de la semiesfera con triangulos gaussianos"""

    @pytest.fixture
    def gaussian_preshapes(self):
        return sample_preshapes(2, 3, 100_000, seed=31)

    def test_height_and_longitude_uniform(self, gaussian_preshapes):
        """Verifica altura U[0, 1/2] y longitud U[0, 2 pi) con 10^5 muestras"""
        suite = uniformity_suite(gaussian_preshapes, which="hemisphere")

        assert set(suite.reports) == {"height", "longitude", "independence"}
        assert suite.min_p_value > 0.001

    def test_height_longitude_independent(self, gaussian_preshapes):
        """Verifica correlaciones cercanas a 0 y la tabla de contingencia"""
        hemisphere = matrix_to_hemisphere_array(gaussian_preshapes)
        heights = 0.5 * np.sin(hemisphere[:, 0])

        with_cos, with_sin = height_longitude_correlations(heights, hemisphere[:, 1])
        report = height_longitude_independence(heights, hemisphere[:, 1])

        assert abs(with_cos) < 0.02
        assert abs(with_sin) < 0.02
        assert report.p_value > 0.001

    def test_constant_height_is_independent(self):
        """Verifica correlaciones 0 y p-valor 1 cuando la altura es constante"""
        heights = np.full(200, 0.5)
        longitudes = np.linspace(0.0, 6.0, 200)

        assert height_longitude_correlations(heights, longitudes) == (0.0, 0.0)
        assert height_longitude_independence(heights, longitudes).p_value == 1.0

    def test_dependent_sample_is_rejected(self, rng):
        """Verifica p < 1e-6 si la altura sigue a la longitud"""
        longitudes = 2 * math.pi * rng.random(5000)
        heights = 0.25 * (1.0 + np.cos(longitudes)) * rng.random(5000) ** 0.1

        report = height_longitude_independence(heights, longitudes)

        assert report.name == "independence"
        assert report.p_value < 1e-6


class TestSuite:
    """Pruebas para la suite de uniformidad"""

    def test_all_on_gaussian(self):
        """Verifica las cinco pruebas sobre triangulos gaussianos planos"""
        suite = uniformity_suite(sample_preshapes(2, 3, 5000, seed=41), workers=2)

        assert set(suite.reports) == {"chikuse_jupp", "sigma_min", "height", "longitude", "independence"}
        assert not suite.rejects(1e-4)

    def test_equilateral_point_mass(self):
        """Verifica que la suite rechace la masa puntual equilatera aunque Chikuse-Jupp no la vea"""
        suite = uniformity_suite(equilateral_point_mass(1000))

        assert suite.reports["chikuse_jupp"].p_value == pytest.approx(1.0)
        assert suite.reports["independence"].p_value == 1.0
        assert suite.rejects(0.01)
        assert suite.min_p_value < 1e-6

    def test_higher_dimension_skips_hemisphere(self):
        """Verifica que con m = 3 'all' omita las marginales de la semiesfera"""
        with patch("src.service.uniformity.SIGMA_MIN_NULL_DRAWS", 2000):
            suite = uniformity_suite(sample_preshapes(3, 3, 500, seed=3))

        assert set(suite.reports) == {"chikuse_jupp", "sigma_min"}

    def test_hemisphere_requires_planar_triangles(self):
        with pytest.raises(InvalidSampleSetError):
            uniformity_suite(sample_preshapes(3, 3, 10, seed=3), which="hemisphere")

    def test_unknown_test(self):
        with pytest.raises(InvalidArgumentError):
            uniformity_suite(equilateral_point_mass(10), which="bingham")
