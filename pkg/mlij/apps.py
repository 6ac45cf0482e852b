from django.apps import AppConfig


class MlijConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'mlij'
