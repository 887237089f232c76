"""
Django settings for the derhamlab project.

derhamlab builds simplicial and Čech-de Rham double complexes on
piecewise-affine geometries in exact rational arithmetic and verifies the
cochain map between them.
"""

from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Environment variables
env = environ.Env(
    DEBUG=(bool, False)
)
# Only try to read .env file if it exists (for local development)
env_file = BASE_DIR / '.env'
if env_file.exists():
    environ.Env.read_env(env_file)

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env('SECRET_KEY', default='django-insecure-derhamlab-local-only')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = env('DEBUG')

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=['localhost', '127.0.0.1', 'testserver'])


# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",

    # derhamlab apps
    "apps.core",
    "apps.geometry",
    "apps.forms",
    "apps.simplicial",
    "apps.cech",
    "apps.cochain",
    "apps.verification",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "derhamlab.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "derhamlab.wsgi.application"


# Database
# Verification runs are only stored when DERHAM_PERSIST_RUNS is on; SQLite
# is the default, DATABASE_URL switches to anything django-environ parses.
DATABASES = {
    "default": env.db("DATABASE_URL", default=f"sqlite:///{BASE_DIR / 'derhamlab.sqlite3'}"),
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


# Static files

STATIC_URL = "/static/"
STATIC_ROOT = BASE_DIR / "staticfiles"

# Default primary key field type
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# derhamlab Specific Settings

DERHAM_DEGREE_CAP = env.int("DERHAM_DEGREE_CAP", default=3)
DERHAM_DEFAULT_EPSILON = env("DERHAM_DEFAULT_EPSILON", default="1/10")  # "p/q" half-width
DERHAM_POLYNOMIAL_FAMILY = env("DERHAM_POLYNOMIAL_FAMILY", default="uniform")  # uniform or graded
DERHAM_SAMPLE_COUNT = env.int("DERHAM_SAMPLE_COUNT", default=200)
DERHAM_SAMPLE_RANGE = env.int("DERHAM_SAMPLE_RANGE", default=100)  # coefficients drawn from {-K..K}/K
DERHAM_SEED = env.int("DERHAM_SEED", default=0)
DERHAM_MAX_BETTI_DEGREE = env.int("DERHAM_MAX_BETTI_DEGREE", default=4)  # highest cap tried when Betti numbers disagree
DERHAM_PERSIST_RUNS = env.bool("DERHAM_PERSIST_RUNS", default=False)
DERHAM_FIXTURE_DIR = BASE_DIR / "apps" / "geometry" / "fixtures"

LOG_DIR = Path(env("DERHAM_LOG_DIR", default=str(BASE_DIR / "logs")))
LOG_DIR.mkdir(parents=True, exist_ok=True)

# Logging Configuration
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "file": {
            "level": "INFO",
            "class": "logging.FileHandler",
            "filename": LOG_DIR / "derhamlab.log",
            "formatter": "verbose",
        },
        "console": {
            "level": env("DERHAM_CONSOLE_LOG_LEVEL", default="WARNING"),
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "derhamlab": {
            "handlers": ["file", "console"],
            "level": "INFO",
            "propagate": True,
        },
        "apps": {
            "handlers": ["file", "console"],
            "level": env("DERHAM_LOG_LEVEL", default="INFO"),
            "propagate": False,
        },
    },
}
