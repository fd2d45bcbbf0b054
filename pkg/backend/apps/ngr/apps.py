from django.apps import AppConfig


class NgrConfig(AppConfig):
    name = "apps.ngr"
