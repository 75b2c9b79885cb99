"""
Django settings for the nonlocal_interference project.
Command-line experiment harness: no database, no HTTP surface.
"""

from pathlib import Path
from decouple import Csv, config

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent

TOOL_NAME = 'nonlocal-interference'
TOOL_VERSION = '0.1.0'

# Django refuses to start without one; nothing here signs data.
SECRET_KEY = config('SECRET_KEY', default='nonlocal-interference-not-secret')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS: list[str] = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'core',
    'audit',
    'interference',
    'boxes',
    'coding',
    'optimizer',
    'bounds',
    'povm',
    'experiments',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

MIDDLEWARE: list[str] = []

# Experiments keep no state between runs
DATABASES: dict[str, dict[str, str]] = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework Configuration (serializers and renderers only)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}

# Experiment defaults (overridable from the environment or .env)
NONLOCAL = {
    'SEED': config('NONLOCAL_SEED', default=20240501, cast=int),
    'TRIALS': config('NONLOCAL_TRIALS', default=100000, cast=int),
    'RESTARTS': config('NONLOCAL_RESTARTS', default=1000, cast=int),
    'LOG_BASE': config('NONLOCAL_LOG_BASE', default='bits'),
    'EPSILONS': config('NONLOCAL_EPSILONS', default='0.05,0.1,0.2', cast=Csv(float)),
}

OPTIMIZER = {
    'TOL': config('OPTIMIZER_TOL', default=1e-6, cast=float),
    'MAXITER': config('OPTIMIZER_MAXITER', default=500, cast=int),
    'LINE_SEARCH_GRID': config('OPTIMIZER_LINE_SEARCH_GRID', default=64, cast=int),
    'REFINE_ITERS': config('OPTIMIZER_REFINE_ITERS', default=40, cast=int),
}

# Logging Configuration
LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_FILE = config('LOG_FILE', default='')
LOG_JSON = config('LOG_JSON', default=False, cast=bool)

_log_handlers = ['console', 'file'] if LOG_FILE else ['console']

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
        'json': {
            '()': 'pythonjsonlogger.jsonlogger.JsonFormatter',
            'format': '%(asctime)s %(name)s %(levelname)s %(message)s'
        }
    },
    'handlers': {
        # stderr, so reports on stdout stay clean
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'json' if LOG_JSON else 'simple',
        },
        **({
            'file': {
                'level': LOG_LEVEL,
                'class': 'logging.FileHandler',
                'filename': LOG_FILE,
                'formatter': 'json',
            },
        } if LOG_FILE else {}),
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': _log_handlers,
            'level': 'WARNING',
            'propagate': False,
        },
        'audit': {
            'handlers': _log_handlers,
            'level': 'INFO',
            'propagate': False,
        },
        **{
            app: {
                'handlers': _log_handlers,
                'level': LOG_LEVEL,
                'propagate': False,
            }
            for app in ('core', 'interference', 'boxes', 'coding', 'optimizer', 'bounds', 'povm', 'experiments')
        },
    },
}
