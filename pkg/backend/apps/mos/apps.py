from django.apps import AppConfig


class MosConfig(AppConfig):
    name = "apps.mos"
