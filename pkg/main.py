import argparse
import sys

from src.service.command_service import (
    EXIT_DOMAIN,
    EXIT_USAGE,
    INPUT_REPRESENTATIONS,
    TARGET_REPRESENTATIONS,
    ShapeCommandService,
)
from src.service.plot_data import PLOT_KINDS
from src.service.sampling import SAMPLE_MODELS
from src.utils.environment import DEFAULT_ALPHA, DEFAULT_SEED
from src.utils.exceptions import DomainError, InvalidArgumentError, SampleSetError
from src.utils.logger import logger

'''
 * triangle-shapes
 * Espacio de formas de triangulos: conversiones, muestreo, construcciones
 * y pruebas de uniformidad desde la linea de comandos.
'''


class UsageError(Exception):
    pass


class ShapeArgumentParser(argparse.ArgumentParser):
    """Los errores de argparse salen con el codigo de uso (1), no con 2."""

    def error(self, message):
        raise UsageError(message)


def _global_options(defaults: bool) -> argparse.ArgumentParser:
    # Los subcomandos repiten las opciones globales sin pisar las ya leidas
    default = (lambda value: value) if defaults else (lambda value: argparse.SUPPRESS)
    parent = ShapeArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=default(DEFAULT_SEED), help="semilla de 64 bits")
    parent.add_argument("--output", "-o", default=default(None), help="archivo de salida (stdout por defecto)")
    parent.add_argument("--format", choices=("structured", "csv", "json"), default=default("structured"))
    parent.add_argument("--alpha", type=float, default=default(DEFAULT_ALPHA), help="nivel de significancia de test")
    parent.add_argument("--workers", type=int, default=default(None), help="hilos para el Monte Carlo")
    return parent


def build_parser() -> ShapeArgumentParser:
    parser = ShapeArgumentParser(prog="triangle-shapes", parents=[_global_options(True)])
    commands = parser.add_subparsers(dest="command", required=True)
    common = [_global_options(False)]

    convert = commands.add_parser("convert", parents=common, help="convierte entre representaciones")
    convert.add_argument("--from", dest="source", required=True, choices=tuple(INPUT_REPRESENTATIONS))
    convert.add_argument("--to", dest="target", required=True, choices=TARGET_REPRESENTATIONS)
    convert.add_argument("--roundtrip", action="store_true", help="agrega la discrepancia maxima de todos los ciclos")
    convert.add_argument("values", type=float, nargs="+")

    sample = commands.add_parser("sample", parents=common, help="genera formas aleatorias")
    sample.add_argument("model", choices=SAMPLE_MODELS)
    sample.add_argument("-n", "--count", type=int, default=1000)
    sample.add_argument("--m", type=int, default=2)
    sample.add_argument("--k", type=int, default=3)
    sample.add_argument("--summary", action="store_true", help="solo las fracciones aguda/recta/obtusa")
    sample.add_argument("--preshape", action="store_true", help="escribe el archivo de preformas que lee test")

    prob = commands.add_parser("prob", parents=common, help="probabilidades exactas en R^n")
    prob.add_argument("n", type=int)
    prob.add_argument("--x", type=float, default=None, help="evalua la CDF marginal de un lado al cuadrado")

    construct = commands.add_parser("construct", parents=common, help="construccion en la semiesfera")
    construct.add_argument("values", type=float, nargs=3)
    construct.add_argument("--lengths", action="store_true", help="los valores son longitudes, no cuadrados")

    test = commands.add_parser("test", parents=common, help="pruebas de uniformidad sobre un archivo de preformas")
    test.add_argument("path")
    test.add_argument("--which", choices=("chikuse-jupp", "sigma-min", "hemisphere", "all"), default="all")

    plot = commands.add_parser("plot-data", parents=common, help="datos de las figuras en CSV")
    plot.add_argument("kind", choices=PLOT_KINDS)
    plot.add_argument("--model", choices=SAMPLE_MODELS, default="gaussian")
    plot.add_argument("-n", "--count", type=int, default=10_000)
    plot.add_argument("--bins", type=int, default=50)
    plot.add_argument("--divisions", type=int, default=10)
    plot.add_argument("--m", type=int, default=2)
    plot.add_argument("--svg", default=None, help="ruta de una dispersion SVG (solo disk-scatter)")
    return parser


def run(args: argparse.Namespace) -> int:
    service = ShapeCommandService(
        output=args.output, fmt=args.format, seed=args.seed, workers=args.workers, alpha=args.alpha,
    )
    if args.command == "convert":
        return service.convert(args.source, args.values, args.target, roundtrip=args.roundtrip)
    if args.command == "sample":
        return service.sample(args.model, args.count, m=args.m, k=args.k, summary=args.summary, preshape=args.preshape)
    if args.command == "prob":
        return service.prob(args.n, x=args.x)
    if args.command == "construct":
        return service.construct(args.values, lengths=args.lengths)
    if args.command == "test":
        return service.test(args.path, which=args.which)
    return service.plot_data(
        args.kind, model=args.model, n_samples=args.count, bins=args.bins,
        divisions=args.divisions, svg=args.svg, m=args.m,
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        logger.error(f"[CLI] Uso incorrecto: {e}")
        print(f"triangle-shapes: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return run(args)
    except DomainError as e:
        logger.error(f"[CLI] Error de dominio: {e}")
        return EXIT_DOMAIN
    except (InvalidArgumentError, SampleSetError, OSError) as e:
        logger.error(f"[CLI] Error en el comando {args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
