from django.apps import AppConfig


class SolvercoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'solvercore'
