"""
Django settings for the SOAV FTN detection project.

Proje bir web uygulaması değil: veritabanı, URL ya da middleware yok. Django
burada app registry, ayar katmanı, management command CLI'ı ve test runner
için kullanılıyor.

Sayısal varsayılanlar ortam değişkenlerinden OKUNMAZ; aynı seed ile her
çalıştırma aynı sonucu vermeli. Yalnızca loglama ortamdan açılıp kapatılabilir.
"""

import os
from pathlib import Path


def get_log_level(env_var: str, default: str = "INFO") -> str:
    value = os.getenv(env_var, default).upper()
    if value in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
        return value
    return default


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Hiçbir kriptografik özellik kullanılmıyor; Django yine de bir değer bekliyor.
SECRET_KEY = "soav-ftn-local-only"

INSTALLED_APPS = [
    "core.apps.CoreConfig",
    "channel.apps.ChannelConfig",
    "soav.apps.SoavAppConfig",
    "baselines.apps.BaselinesConfig",
    "harness.apps.HarnessConfig",
    "cli.apps.CliConfig",
]

# No database: every test is a SimpleTestCase and results live in CSV files.
DATABASES: dict = {}

if os.getenv("DJANGO_LOGGING", "0") == "1":
    LOGGING = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "verbose": {
                "format": "[{asctime}] {levelname} {name} {message}",
                "style": "{",
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "verbose",
            },
        },
        "root": {
            "handlers": ["console"],
            "level": get_log_level("DJANGO_LOG_LEVEL"),
        },
        "loggers": {
            "harness": {
                "handlers": ["console"],
                "level": get_log_level("DJANGO_LOG_LEVEL"),
                "propagate": False,
            },
        },
    }

# SOAV-FISTA detector: λ = 0.01, L = 0.1, all-ones start. tol=0 disables early
# stopping so iteration counts are fixed.
SOAV_DEFAULTS = {
    "lam": 0.01,
    "lipschitz": 0.1,
    "max_iter": 100,
    "tol": 0.0,
    "initial_point": "ones",
    "objective_trace": False,
    "auto_lipschitz": False,
}

# Power iteration used for the optional L = 2λσ_max(H)² estimate.
POWER_ITERATION_TOL = 1e-6
POWER_ITERATION_MAX_ITER = 500

# ℓ∞ baseline: penalty continuation over μ, proximal-gradient inner loop.
LINF_DEFAULTS = {
    "epsilon": None,  # None -> discrepancy principle ε² = rows·N0/2
    "penalty_schedule": (1e-2, 1e-1, 1.0, 1e1, 1e2),
    "inner_tol": 1e-8,
    "max_inner": 500,
    "residual_slack": 1.01,
}

ML_DEFAULTS = {
    "max_dimension": 24,
    "chunk_size": 1 << 14,
}
ML_MAX_DIMENSION_LIMIT = 30

EXPERIMENT_DEFAULTS = {
    "snr_grid": "0:2:16",
    "realizations": 1000,
    "vectors_per_realization": 900,
    "master_seed": 0,
    "workers": 1,
    "detectors": ("soav", "linf"),
    "modulation": "qpsk",
}

TIMING_DEFAULTS = {
    "n_symbols": 150,
    "n_dims": 100,
    "trials": 100,
    "min_trials": 10,
    "warmup": 3,
    "snr_db": 10.0,
    "detectors": ("soav", "linf"),
}

# Self-check sample count (each suite scales it to its own cost).
SELFCHECK_DEFAULT_SAMPLES = 1000
