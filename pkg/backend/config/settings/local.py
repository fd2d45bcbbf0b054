from config.env import env
from config.settings.base import *  # noqa

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = True


# LOGGING
# ------------------------------------------------------------------------------
LOGGING["loggers"]["apps"]["level"] = env(  # type: ignore # noqa F405
    "RECAL_LOG_LEVEL", default="DEBUG"
)
