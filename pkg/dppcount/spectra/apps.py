from django.apps import AppConfig


class SpectraConfig(AppConfig):
    name = 'spectra'
    verbose_name = 'Operator spectra and counting distributions'
