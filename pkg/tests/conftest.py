"""
Configuración compartida para las pruebas unitarias
"""
import io
import math

import numpy as np
import pytest

from src.repository.models.sampling_model import RngSeed
from src.repository.models.shape_model import SquaredSides
from src.service.command_service import ShapeCommandService


@pytest.fixture
def rng():
    """Generador PCG64 sembrado, independiente en cada prueba"""
    return RngSeed(20240601).generator()


@pytest.fixture
def worked_example_vertices():
    """Triangulo 45-45-90 centrado con vertices (-2,-1), (1,-1), (1,2)"""
    return np.array([
        [-2.0, 1.0, 1.0],
        [-1.0, -1.0, 2.0],
    ])


@pytest.fixture
def right_isosceles_sides():
    """Lados al cuadrado (1/2, 1/4, 1/4) del triangulo 3 sqrt2, 3, 3"""
    return SquaredSides(0.5, 0.25, 0.25)


@pytest.fixture
def equilateral_sides():
    return SquaredSides(1 / 3, 1 / 3, 1 / 3)


@pytest.fixture
def three_four_five_sides():
    """Triangulo 3-4-5 normalizado: (9, 16, 25) / 50"""
    return SquaredSides.normalized(9.0, 16.0, 25.0)


@pytest.fixture
def random_sides(rng):
    """Lados al cuadrado de 200 formas gaussianas no degeneradas"""
    matrices = rng.standard_normal((200, 2, 2))
    matrices /= np.sqrt(np.sum(matrices ** 2, axis=(1, 2)))[:, None, None]
    edges = matrices @ np.array([
        [1 / math.sqrt(2), -1 / math.sqrt(2), 0.0],
        [1 / math.sqrt(6), 1 / math.sqrt(6), -2 / math.sqrt(6)],
    ])
    return np.sum(edges ** 2, axis=1)


@pytest.fixture
def output_buffer():
    return io.StringIO()


@pytest.fixture
def command_service(output_buffer):
    """Servicio de comandos escribiendo en memoria con semilla fija"""
    return ShapeCommandService(output=output_buffer, fmt="structured", seed=7, workers=1)
