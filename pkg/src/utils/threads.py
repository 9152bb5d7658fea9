from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from src.utils.logger import logger

T = TypeVar("T")
R = TypeVar("R")


def execute_threads(task: Callable[[T], R], items: Iterable[T], max_workers: int | None = None) -> list[R]:
    """
    Ejecuta task sobre cada item y devuelve los resultados en el orden de entrada.

    Con un solo worker (o un solo item) no se levanta el pool. numpy libera el
    GIL en los kernels pesados, por eso alcanza con hilos.
    """
    items = list(items)
    if max_workers is not None and max_workers < 1:
        raise ValueError(f"max_workers debe ser >= 1: {max_workers}")
    if max_workers == 1 or len(items) <= 1:
        return [task(item) for item in items]

    logger.debug(f"[Threads] Inicio de {len(items)} tareas")
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        logger.debug(f"[Threads] MAX_THREADS {max_workers}")
        results = list(executor.map(task, items))
    logger.debug("[Threads] Fin de tareas")
    return results
