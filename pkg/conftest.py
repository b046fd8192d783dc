import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "dppcount.settings")
django.setup()
