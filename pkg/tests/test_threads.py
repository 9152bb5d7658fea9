"""
Pruebas unitarias para la ejecucion en hilos
"""
from concurrent.futures import ThreadPoolExecutor

import pytest

from src.utils.threads import execute_threads


class TestExecuteThreads:
    """Pruebas para execute_threads"""

    def test_preserves_order(self):
        """Verifica que los resultados respeten el orden de entrada"""
        assert execute_threads(lambda x: x * x, range(20), max_workers=4) == [x * x for x in range(20)]

    def test_single_worker_runs_inline(self, mocker):
        """Verifica que con un worker no se levante el pool"""
        mock_executor = mocker.patch("src.utils.threads.ThreadPoolExecutor")

        result = execute_threads(lambda x: x + 1, [1, 2, 3], max_workers=1)

        assert result == [2, 3, 4]
        mock_executor.assert_not_called()

    def test_empty_items(self):
        assert execute_threads(lambda x: x, [], max_workers=4) == []

    def test_invalid_workers(self):
        with pytest.raises(ValueError):
            execute_threads(lambda x: x, [1, 2], max_workers=0)

    def test_propagates_errors(self):
        """Verifica que una excepcion dentro de una tarea llegue al llamador"""
        def task(x):
            if x == 2:
                raise RuntimeError("fallo")
            return x

        with pytest.raises(RuntimeError):
            execute_threads(task, [1, 2, 3], max_workers=2)

    def test_logs_requested_workers(self, mocker):
        """Verifica que el log y el pool usen el max_workers recibido"""
        # Arrange
        mock_logger = mocker.patch("src.utils.threads.logger")
        pool_spy = mocker.patch("src.utils.threads.ThreadPoolExecutor", wraps=ThreadPoolExecutor)

        # Act
        execute_threads(lambda x: x, [1, 2, 3], max_workers=3)

        # Assert
        pool_spy.assert_called_once_with(max_workers=3)
        mock_logger.debug.assert_any_call("[Threads] MAX_THREADS 3")
