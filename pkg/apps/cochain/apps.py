from django.apps import AppConfig


class CochainConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.cochain'
    verbose_name = 'Cochain map and bounds'
