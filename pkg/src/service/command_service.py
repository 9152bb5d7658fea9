import math
from typing import Sequence

import numpy as np
import pandas as pd

from src.repository.models.frame_model import EdgeMatrix, ShapeMatrix
from src.repository.models.sampling_model import ACUTE, OBTUSE, RIGHT
from src.repository.models.shape_model import DiskPoint, HemispherePoint, SquaredSides, SvdShape
from src.repository.record_repository import RecordRepository
from src.repository.sample_repository import SampleRepository
from src.repository.svg_repository import SvgRepository
from src.service.conversions import (
    convert_array,
    hemisphere_cartesian_array,
    hemisphere_to_svd_array,
    roundtrip_batch,
    sides_to_disk_array,
    svd_to_matrix_array,
)
from src.service.core import shape_from_edges, shape_from_triangle
from src.service.geometry import area, construct_in_hemisphere
from src.service.plot_data import plot_data
from src.service.sampling import (
    SAMPLE_MODELS,
    as_seed,
    classify_batch,
    gaussian_matrices,
    ndim_preshape_array,
    obtuse_probability_ndim,
    run_chunks,
    sample_sides,
    shape_sides_batch,
    squared_side_marginal_cdf,
    uniform_hemisphere_array,
)
from src.service.uniformity import uniformity_suite
from src.utils.environment import DEFAULT_ALPHA, MC_WORKERS
from src.utils.exceptions import InvalidArgumentError
from src.utils.logger import logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_REJECTED = 3

INPUT_REPRESENTATIONS = {
    "sides": 3,
    "disk": 2,
    "hemisphere": 2,
    "svd": 3,
    "matrix": 4,
    "vertices": 6,
    "edges": 6,
}
TARGET_REPRESENTATIONS = ("svd", "sides", "hemisphere", "disk", "matrix", "cartesian")
FIELDS = {
    "svd": ("sigma1", "sigma2", "theta"),
    "sides": ("a2", "b2", "c2"),
    "hemisphere": ("latitude", "longitude"),
    "disk": ("r", "phi"),
    "matrix": ("m11", "m12", "m21", "m22"),
    "cartesian": ("x", "y", "z"),
}


def parse_representation(source: str, values: Sequence[float]) -> tuple[str, np.ndarray]:
    """Valida la entrada con su tipo de valor y la devuelve como (representacion, arreglo)."""
    if source not in INPUT_REPRESENTATIONS:
        raise InvalidArgumentError(f"Representacion de entrada desconocida: {source}")
    values = [float(v) for v in values]
    if len(values) != INPUT_REPRESENTATIONS[source]:
        raise InvalidArgumentError(f"{source} requiere {INPUT_REPRESENTATIONS[source]} valores: {len(values)}")
    if source == "sides":
        return "sides", np.array(SquaredSides(*values).as_tuple())
    if source == "disk":
        d = DiskPoint(*values)
        return "disk", np.array([d.r, d.phi])
    if source == "hemisphere":
        h = HemispherePoint(*values)
        return "hemisphere", np.array([h.latitude, h.longitude])
    if source == "svd":
        s = SvdShape(*values)
        return "svd", np.array([s.sigma1, s.sigma2, s.theta])
    if source == "matrix":
        return "matrix", ShapeMatrix.normalized(np.reshape(values, (2, 2))).entries.copy()
    if source == "vertices":
        return "matrix", shape_from_triangle(np.reshape(values, (2, 3))).entries.copy()
    return "matrix", shape_from_edges(EdgeMatrix(np.reshape(values, (2, 3)))).entries.copy()


def converted_values(representation: str, values: np.ndarray, target: str) -> np.ndarray:
    if target not in TARGET_REPRESENTATIONS:
        raise InvalidArgumentError(f"Representacion de salida desconocida: {target}")
    if target == "cartesian":
        return hemisphere_cartesian_array(convert_array(values, representation, "hemisphere"))
    return np.asarray(convert_array(values, representation, target)).ravel()


def validate_output(target: str, values: np.ndarray) -> None:
    """Reconstruye el tipo de valor de la salida para que el registro cumpla sus invariantes."""
    if target == "sides":
        SquaredSides(*values)
    elif target == "disk":
        DiskPoint(*values)
    elif target == "hemisphere":
        HemispherePoint(*values)
    elif target == "svd":
        SvdShape(*values)
    elif target == "matrix":
        ShapeMatrix(np.reshape(values, (2, 2)))


class ShapeCommandService:

    def __init__(self, output=None, fmt: str = "structured", seed=None, workers: int | None = None,
                 alpha: float | None = None) -> None:
        self.records = RecordRepository(output, fmt)
        self.samples = SampleRepository()
        self.svg = SvgRepository()
        self.output = output
        self.seed = as_seed(seed)
        self.workers = workers or MC_WORKERS
        self.alpha = DEFAULT_ALPHA if alpha is None else alpha

    def convert(self, source: str, values: Sequence[float], target: str, roundtrip: bool = False) -> int:
        representation, start = parse_representation(source, values)
        result = converted_values(representation, start, target)
        validate_output(target, result)
        record: dict = {"from": source, "to": target}
        record.update({name: float(v) for name, v in zip(FIELDS[target], result)})
        if roundtrip:
            report = roundtrip_batch(representation, start[None])
            record["roundtrip_max_discrepancy"] = report.max_discrepancy
            record["roundtrip_worst_cycle"] = report.worst_cycle
        logger.info(f"[Conversiones] {source} -> {target}")
        self.records.write_record(record)
        return EXIT_OK

    def sample(self, model: str, n_samples: int, m: int = 2, k: int = 3, summary: bool = False,
               preshape: bool = False) -> int:
        if model not in SAMPLE_MODELS:
            raise InvalidArgumentError(f"Modelo de muestreo desconocido: {model}")
        if model != "ndim" and (m, k) != (2, 3):
            raise InvalidArgumentError(f"Solo el modelo ndim acepta --m/--k: m={m}, k={k}")
        logger.info(f"[Muestreo] Modelo {model}, n={n_samples}, semilla={self.seed.seed}")

        if preshape:
            preshapes = np.concatenate(run_chunks(
                n_samples, self.seed, lambda rng, size: self._preshape_batch(model, rng, size, m, k), self.workers,
            ))
            self.samples.write(preshapes, self.output)
            return EXIT_OK
        if model == "ndim" and k != 3:
            raise InvalidArgumentError(f"Las filas de lados requieren k=3; use --preshape para k={k}")
        if summary:
            self.records.write_record(self._class_summary(model, n_samples, m))
            return EXIT_OK

        sides = sample_sides(model, n_samples, self.seed, self.workers, m=m)
        disk = sides_to_disk_array(sides)
        frame = pd.DataFrame({
            "a2": sides[:, 0],
            "b2": sides[:, 1],
            "c2": sides[:, 2],
            "r": disk[:, 0],
            "phi": disk[:, 1],
            "class": classify_batch(sides),
        })
        self.records.write_table(frame)
        return EXIT_OK

    @staticmethod
    def _preshape_batch(model: str, rng, size: int, m: int, k: int) -> np.ndarray:
        if model == "ndim":
            return ndim_preshape_array(rng, m, k, size)
        if model == "gaussian":
            return gaussian_matrices(rng, size)
        if model == "hemisphere":
            return svd_to_matrix_array(hemisphere_to_svd_array(uniform_hemisphere_array(rng, size)))
        sides = shape_sides_batch(model, rng, size)
        return svd_to_matrix_array(convert_array(sides, "sides", "svd"))

    def _class_summary(self, model: str, n_samples: int, m: int) -> dict:
        def count(rng, size):
            labels = classify_batch(shape_sides_batch(model, rng, size, m))
            return np.array([np.count_nonzero(labels == c) for c in (ACUTE, RIGHT, OBTUSE)])

        acute, right, obtuse = np.sum(run_chunks(n_samples, self.seed, count, self.workers), axis=0)
        record = {"model": model, "n": n_samples, "seed": self.seed.seed}
        if model == "ndim":
            record["m"] = m
        for name, value in (("acute", acute + right), ("right", right), ("obtuse", obtuse)):
            fraction = float(value) / n_samples
            record[f"{name}_fraction"] = fraction
            record[f"{name}_standard_error"] = math.sqrt(fraction * (1.0 - fraction) / n_samples)
        logger.info(f"[Muestreo] Fraccion aguda {record['acute_fraction']:.6f}, obtusa {record['obtuse_fraction']:.6f}")
        return record

    def prob(self, n: int, x: float | None = None) -> int:
        obtuse = obtuse_probability_ndim(n)
        record = {"n": n, "obtuse_probability": obtuse, "acute_probability": 1.0 - obtuse}
        if x is not None:
            record["x"] = x
            record["squared_side_cdf"] = squared_side_marginal_cdf(n, x)
        self.records.write_record(record)
        return EXIT_OK

    def construct(self, values: Sequence[float], lengths: bool = False) -> int:
        values = [float(v) for v in values]
        if len(values) != 3:
            raise InvalidArgumentError(f"construct requiere 3 valores: {len(values)}")
        if lengths:
            values = [v * v for v in values]
        sides = SquaredSides.normalized(*values)
        result = construct_in_hemisphere(sides)
        record: dict = {
            "a2": sides.a2, "b2": sides.b2, "c2": sides.c2,
            "area": area(sides),
            "S": result.S, "P": result.P,
            "SP": result.height,
            "degenerate": result.degenerate,
        }
        for parallelian in result.parallelians:
            record[f"parallelian_{parallelian.index}"] = parallelian.cartesian_endpoints
            record[f"parallelian_{parallelian.index}_length"] = parallelian.length
        for triangle in result.triangles:
            record[f"triangle_{triangle.parallelian}_sides"] = triangle.sides
            record[f"triangle_{triangle.parallelian}_ratio_residual"] = triangle.ratio_residual
            record[f"triangle_{triangle.parallelian}_altitude_residual"] = triangle.altitude_residual
        if result.degenerate:
            logger.warning(f"[CLI] Triangulo degenerado: {sides.as_tuple()}")
        self.records.write_record(record)
        return EXIT_OK

    def test(self, source, which: str = "all") -> int:
        preshapes = self.samples.read(source)
        suite = uniformity_suite(preshapes, which=which, seed=self.seed, workers=self.workers)
        records = [
            {
                "test": report.name,
                "statistic": report.statistic,
                "reference": report.reference,
                "p_value": report.p_value,
                "sample_count": report.sample_count,
                "rejected": report.rejects(self.alpha),
            }
            for report in suite.reports.values()
        ]
        self.records.write_records(records)
        if suite.rejects(self.alpha):
            logger.info(f"[CLI] Uniformidad rechazada con alpha={self.alpha} (p minimo {suite.min_p_value:.3g})")
            return EXIT_REJECTED
        return EXIT_OK

    def plot_data(self, kind: str, model: str = "gaussian", n_samples: int = 10_000, bins: int = 50,
                  divisions: int = 10, svg: str | None = None, m: int = 2) -> int:
        frame, report = plot_data(kind, model, n_samples, self.seed, bins, divisions, self.workers, m=m)
        self.records.write_table(frame)
        if report is not None:
            logger.info(f"[CLI] {report.name}: chi2={report.statistic:.6g} p={report.p_value:.6g}")
        if svg:
            if kind != "disk-scatter":
                raise InvalidArgumentError("--svg solo esta disponible para disk-scatter")
            self.svg.write_scatter(svg, frame["x"], frame["y"], frame["class"])
        return EXIT_OK
