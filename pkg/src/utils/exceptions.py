"""
Jerarquia de errores del paquete.

Todas las excepciones derivan de ValueError, igual que las validaciones de
las integraciones originales, para que el codigo cliente pueda capturarlas
sin conocer el detalle.
"""


class ShapeError(ValueError):
    """Error base del espacio de formas"""


class InvalidArgumentError(ShapeError):
    """Argumento fuera de su dominio (n < 2, n_samples < 1, dimensiones invalidas)"""


class DomainError(ShapeError):
    """La entrada es un valor numerico valido pero no representa una forma"""


class DegenerateInputError(DomainError):
    """Matriz o configuracion nula"""


class InvalidEdgeMatrixError(DomainError):
    """Las columnas de la matriz de aristas no suman cero"""


class InvalidShapeMatrixError(DomainError):
    """La matriz de forma no tiene norma de Frobenius unitaria"""


class OutsideDiskError(DomainError):
    """Punto fuera del disco de radio 1/2 o fuera de la semiesfera"""


class NotATriangleError(DomainError):
    """Los lados no cumplen la desigualdad triangular"""


class InvalidQuaternionError(DomainError):
    """El cuaternion no es unitario"""


class InvalidAreaForKindError(DomainError):
    """El area no es compatible con la familia de triangulos especiales"""


class SampleSetError(ShapeError):
    """Problema con un conjunto de muestras"""


class InvalidSampleSetError(SampleSetError):
    """Muestras con dimensiones distintas o archivo mal formado"""


class EmptySampleSetError(SampleSetError):
    """Conjunto de muestras vacio"""
