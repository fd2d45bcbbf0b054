from config.settings.base import *  # noqa

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#test-runner
TEST_RUNNER = "django.test.runner.DiscoverRunner"

# RECALIBRATION
# ------------------------------------------------------------------------------
RECAL_SEED = 20150601
RECAL_WORKERS = 1

# LOGGING
# ------------------------------------------------------------------------------
LOGGING["loggers"]["apps"]["level"] = "WARNING"  # type: ignore # noqa F405
LOGGING["loggers"]["apps"]["propagate"] = True  # type: ignore # noqa F405
LOGGING["loggers"]["apps"]["handlers"] = []  # type: ignore # noqa F405
