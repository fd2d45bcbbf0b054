from config.env import BACKEND_DIR, env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = env.bool("DJANGO_DEBUG", False)
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env("DJANGO_SECRET_KEY", default="recal-has-no-web-surface")
TIME_ZONE = "UTC"
USE_TZ = True


# DATABASES
# ------------------------------------------------------------------------------
# Nothing is persisted; fits and scores are written as flat text files.
DATABASES: dict = {}


# APPS
# ------------------------------------------------------------------------------
DJANGO_APPS: list[str] = []
THIRD_PARTY_APPS: list[str] = []

LOCAL_APPS = [
    "apps.core",
    "apps.distributions",
    "apps.mos",
    "apps.ngr",
    "apps.bootstrap",
    "apps.verification",
    "apps.harness",
    "apps.cli",
]

# https://docs.djangoproject.com/en/dev/ref/settings/#installed-apps
INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS


# RECALIBRATION
# ------------------------------------------------------------------------------
RECAL_SEED = env.int("RECAL_SEED", default=0)
# Fold-level worker processes; 1 runs folds in-process.
RECAL_WORKERS = env.int("RECAL_WORKERS", default=1)
RECAL_OUTPUT_DIR = env("RECAL_OUTPUT_DIR", default=str(BACKEND_DIR / "output"))
RECAL_COVERAGE_LEVELS = env.list(
    "RECAL_COVERAGE_LEVELS", cast=float, default=[0.5, 0.9]
)

RECAL_OPTIMIZER = {
    "MAX_EVALUATIONS": env.int("RECAL_OPTIMIZER_MAX_EVALUATIONS", default=10_000),
    "TOLERANCE": env.float("RECAL_OPTIMIZER_TOLERANCE", default=1e-10),
    "RESTARTS": env.int("RECAL_OPTIMIZER_RESTARTS", default=1),
    "INITIAL_DELTA": env.float("RECAL_OPTIMIZER_INITIAL_DELTA", default=1e-3),
    "VARIANCE_FLOOR": env.float("RECAL_OPTIMIZER_VARIANCE_FLOOR", default=1e-8),
}

RECAL_BOOTSTRAP = {
    "K": env.int("RECAL_BOOTSTRAP_K", default=50),
    "REDRAW_CAP_FACTOR": env.int("RECAL_BOOTSTRAP_REDRAW_CAP_FACTOR", default=100),
}

RECAL_QUADRATURE = {
    "RELATIVE_TOLERANCE": env.float("RECAL_QUADRATURE_RTOL", default=1e-8),
    "TAIL_PROBABILITY": env.float("RECAL_QUADRATURE_TAIL", default=1e-9),
    "LIMIT": env.int("RECAL_QUADRATURE_LIMIT", default=200),
}


# LOGGING
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(levelname)s %(asctime)s %(module)s "
            + "%(process)d %(thread)d %(message)s"
        }
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {"level": "WARNING", "handlers": ["console"]},
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": env("RECAL_LOG_LEVEL", default="INFO"),
            "propagate": False,
        },
    },
}
