from django.apps import AppConfig


class CoveringConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'covering'
