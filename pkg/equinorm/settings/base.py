from pathlib import Path
import os
import environ

# Initialize environment variables
env = environ.Env()
BASE_DIR = Path(__file__).resolve().parent.parent.parent
# Read the .env file
env.read_env(os.path.join(BASE_DIR, ".env"))

# SECRET_KEY
SECRET_KEY = env("SECRET_KEY", default="equinorm-insecure-development-key")

DEBUG = env.bool("DEBUG", default=False)

ALLOWED_HOSTS = env.list("ALLOWED_HOSTS", default=[])

# Database (management commands never touch it, Django expects one)
DATABASES = {
    "default": env.db(
        "DATABASE_URL", default=f"sqlite:///{BASE_DIR / 'equinorm.sqlite3'}"
    )
}

# Application definition
INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "solvercore",
    "norms",
    "portfolio",
    "mlij",
    "covering",
    "satisfaction",
    "clustering",
    "cli",
]

MIDDLEWARE = []

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ----------------------------------
# Portfolio toolkit
# ----------------------------------
# Overrides every --seed when set
EQUINORM_SEED = env.int("EQUINORM_SEED", default=None)
EQUINORM_SAMPLES = env.int("EQUINORM_SAMPLES", default=200)
EQUINORM_TOL = env.float("EQUINORM_TOL", default=1e-9)
EQUINORM_MAX_BRUTE = env.int("EQUINORM_MAX_BRUTE", default=10**7)
EQUINORM_MAX_CLUSTER_SUBSETS = env.int("EQUINORM_MAX_CLUSTER_SUBSETS", default=10**6)
EQUINORM_ARRANGEMENT_SAMPLES = env.int("EQUINORM_ARRANGEMENT_SAMPLES", default=10**5)
EQUINORM_MAX_DIMENSION = env.int("EQUINORM_MAX_DIMENSION", default=10**6)
EQUINORM_JOBS = env.int("EQUINORM_JOBS", default=1)
EQUINORM_LOG_LEVEL = env("EQUINORM_LOG_LEVEL", default="INFO")

# ----------------------------------
# Logging
# ----------------------------------
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": EQUINORM_LOG_LEVEL,
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
    },
}
