from config.env import env
from config.settings.base import *  # noqa

# GENERAL
# ------------------------------------------------------------------------------
# Batch runs on shared machines: require an explicit output location and seed.
RECAL_OUTPUT_DIR = env("RECAL_OUTPUT_DIR")
RECAL_SEED = env.int("RECAL_SEED")
RECAL_WORKERS = env.int("RECAL_WORKERS", default=4)


# LOGGING
# ------------------------------------------------------------------------------
LOGGING["root"]["level"] = "INFO"  # type: ignore # noqa F405
LOGGING["loggers"]["apps"]["level"] = env(  # type: ignore # noqa F405
    "RECAL_LOG_LEVEL", default="INFO"
)
