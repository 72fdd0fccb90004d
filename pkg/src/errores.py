"""
Excepciones del sistema.
Todas derivan de ValueError o RuntimeError para que el código que ya captura
esas excepciones siga funcionando.
"""


class ErrorContrato(ValueError):
    """Se viola una precondición de una operación (punto base, base degenerada, ...)."""


class ErrorParametro(ValueError):
    """Un parámetro está fuera de su rango válido."""


class ErrorConsistencia(RuntimeError):
    """Una comprobación numérica interna no se cumple dentro de la tolerancia."""


class ErrorEtapa(RuntimeError):
    """
    Fallo de una etapa del pipeline.

    Atributos:
        etapa (str): Nombre de la etapa que falló
        causa (Exception): Excepción original
    """

    def __init__(self, etapa: str, causa: Exception):
        super().__init__(f"Fallo en la etapa '{etapa}': {causa}")
        self.etapa = etapa
        self.causa = causa
