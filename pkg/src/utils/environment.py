from decouple import config

# Logging
LOG_LEVEL = config("LOG_LEVEL", default="INFO")
LOG_TIMEZONE = config("LOG_TIMEZONE", default="America/Lima")

# Muestreo Monte Carlo
DEFAULT_SEED = config("DEFAULT_SEED", cast=int, default=0)
MC_WORKERS = config("MC_WORKERS", cast=int, default=1)
MC_CHUNK_SIZE = config("MC_CHUNK_SIZE", cast=int, default=1_000_000)

# Pruebas estadisticas
DEFAULT_ALPHA = config("DEFAULT_ALPHA", cast=float, default=0.01)
SIGMA_MIN_NULL_DRAWS = config("SIGMA_MIN_NULL_DRAWS", cast=int, default=100_000)

# Validacion y salida
VALIDATION_TOLERANCE = config("VALIDATION_TOLERANCE", cast=float, default=1e-9)
CSV_FLOAT_FORMAT = config("CSV_FLOAT_FORMAT", default="%.17g")
