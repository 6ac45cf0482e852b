import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "equinorm.settings.local")
django.setup()
