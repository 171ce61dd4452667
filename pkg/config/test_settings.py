from config.settings import *

# Testlerde konsol logu kapalı; assertLogs kendi handler'ını ekler.
LOGGING_CONFIG = None

SECRET_KEY = "soav-ftn-test"

# Keep default-driven runs short; tests that need full-size values pass them explicitly.
EXPERIMENT_DEFAULTS = {
    **EXPERIMENT_DEFAULTS,
    "realizations": 4,
    "vectors_per_realization": 10,
}

TIMING_DEFAULTS = {
    **TIMING_DEFAULTS,
    "n_symbols": 15,
    "n_dims": 10,
    "trials": 10,
}

SELFCHECK_DEFAULT_SAMPLES = 100
