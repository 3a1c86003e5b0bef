# -*- coding: utf-8 -*-
import os

import environ


def env_variable_truthy(key, default=""):
    return os.environ.get(key, default).lower().strip() in ["1", "true", "t", "y"]


env = environ.Env(
    MIXPREP_DISTINGUISHABILITY_KAPPA=(float, 10.0),
    MIXPREP_DEFAULT_SEED=(int, 20020101),
    MIXPREP_SWEEP_POINTS=(int, 500),
    MIXPREP_PHYSICAL_TOL=(float, 1e-10),
    MIXPREP_EQUALIZATION_MAX_ITER=(int, 500),
)  # set default values and casting
DEBUG = env_variable_truthy("DEBUG")

# Path-length separation required between paths, in units of the longer coherence length.
MIXPREP_DISTINGUISHABILITY_KAPPA = env("MIXPREP_DISTINGUISHABILITY_KAPPA")
MIXPREP_DEFAULT_SEED = env("MIXPREP_DEFAULT_SEED")
MIXPREP_SWEEP_POINTS = env("MIXPREP_SWEEP_POINTS")
MIXPREP_PHYSICAL_TOL = env("MIXPREP_PHYSICAL_TOL")
MIXPREP_EQUALIZATION_MAX_ITER = env("MIXPREP_EQUALIZATION_MAX_ITER")
MIXPREP_LOG_LEVEL = os.environ.get("MIXPREP_LOG_LEVEL", "INFO").upper()

INSTALLED_APPS = [
    "mixprep.apps.states",
    "mixprep.apps.circuits",
    "mixprep.apps.designer",
    "mixprep.apps.tomography",
]

# Everything the commands read and write is a plain file.
DATABASES: dict = {}

USE_TZ = True
TIME_ZONE = "UTC"
LANGUAGE_CODE = "en-us"

IS_TEST = False

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": ("%(levelname)s %(asctime)s |" "%(pathname)s:%(lineno)d (in %(funcName)s) |" " %(message)s ")
        },
        "simple": {"format": "%(levelname)s %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
        },
        "mixprep": {
            "handlers": ["console"],
            "level": MIXPREP_LOG_LEVEL,
        },
    },
}

SECRET_KEY = os.environ.get("SECRET_KEY", "secret")
