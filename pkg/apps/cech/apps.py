from django.apps import AppConfig


class CechConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.cech'
    verbose_name = 'Cech-de Rham complex'
