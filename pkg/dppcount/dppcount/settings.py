import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file if present
load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.environ.get('SECRET_KEY', 'changeme-secret-key')

INSTALLED_APPS = [
    'spectra',
    'reports',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            # Reports are plain text, never HTML.
            'autoescape': False,
        },
    },
]

# Results are written to flat files only.
DATABASES = {}

# Numerical defaults. The ``spectra`` core takes every tunable as an explicit
# argument; the command-line layer reads these and echoes them in metadata.
DPPCOUNT = {
    'TRUNCATION': float(os.environ.get('DPPCOUNT_TRUNCATION', '12')),
    'LOG_CONCAVITY_FLOOR': float(os.environ.get('DPPCOUNT_LOG_CONCAVITY_FLOOR', '1e-14')),
    'SPACING_STEP': float(os.environ.get('DPPCOUNT_SPACING_STEP', '0.02')),
    'WORKERS': int(os.environ.get('DPPCOUNT_WORKERS', '1')),
}

LOG_LEVEL = os.environ.get('DPPCOUNT_LOG_LEVEL', 'WARNING').upper()

# Log records go to stderr so that stdout and --out files stay byte-for-byte
# reproducible.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'spectra': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'reports': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}

USE_I18N = False
