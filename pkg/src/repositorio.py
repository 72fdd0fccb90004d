"""
Módulo que gestiona la persistencia de los resultados de los experimentos.
Escribe el reporte en JSON, las tablas en CSV con separador ';' y las
muestras de los conjuntos cero; también permite volver a cargarlos.
"""

import csv
import json
import logging
import os
from typing import Dict, List

from esfera import intercalar

logger = logging.getLogger(__name__)

COLUMNAS_DECAIMIENTO = ['n', 'sup_dist_sigma_to_p', 'sup_dist_image_to_q', 'sample_size']
COLUMNAS_DEFECTO = ['n', 'min_total', 'g_component', 'fiber_component', 'starts']


class RepositorioResultados:
    """
    Escribe y lee los archivos de resultados de un directorio de salida.

    Atributos:
        directorio (str): Directorio donde se guardan los archivos
    """

    def __init__(self, directorio: str):
        """Crea el directorio de salida si no existe."""
        if not directorio:
            raise ValueError("El directorio de salida no puede estar vacío")
        self.directorio = directorio
        try:
            os.makedirs(directorio, exist_ok=True)
        except OSError as e:
            raise IOError(f"No se pudo crear el directorio {directorio}: {e}")

    def ruta(self, nombre: str) -> str:
        return os.path.join(self.directorio, nombre)

    def guardar_json(self, nombre: str, datos) -> str:
        """
        Guarda datos en un archivo JSON con claves ordenadas.

        Returns:
            str: Ruta del archivo escrito

        Raises:
            IOError: Si hay problemas al escribir el archivo
        """
        ruta = self.ruta(nombre)
        try:
            with open(ruta, 'w', encoding='utf-8') as f:
                json.dump(datos, f, indent=4, ensure_ascii=False, sort_keys=True)
        except Exception as e:
            raise IOError(f"Error al guardar el archivo JSON: {e}")
        return ruta

    def cargar_json(self, nombre: str):
        """
        Carga un archivo JSON del directorio.

        Raises:
            IOError: Si el archivo no existe o no puede leerse
            ValueError: Si el contenido no es JSON válido
        """
        ruta = self.ruta(nombre)
        try:
            with open(ruta, 'r', encoding='utf-8') as f:
                return json.load(f)
        except FileNotFoundError:
            raise IOError(f"Archivo no encontrado: {ruta}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Error al decodificar JSON: {e}")

    def guardar_csv(self, nombre: str, columnas: List[str], filas: List[list]) -> str:
        """
        Guarda una tabla en CSV con separador ';'.

        Raises:
            IOError: Si hay problemas al escribir el archivo
        """
        ruta = self.ruta(nombre)
        try:
            with open(ruta, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f, delimiter=';')
                writer.writerow(columnas)
                writer.writerows(filas)
        except Exception as e:
            raise IOError(f"Error al guardar el archivo CSV: {e}")
        return ruta

    def cargar_csv(self, nombre: str) -> List[Dict[str, str]]:
        """
        Carga una tabla CSV como lista de diccionarios (valores como texto).

        Raises:
            IOError: Si el archivo no existe
        """
        ruta = self.ruta(nombre)
        try:
            with open(ruta, 'r', encoding='utf-8') as f:
                return list(csv.DictReader(f, delimiter=';'))
        except FileNotFoundError:
            raise IOError(f"Archivo no encontrado: {ruta}")

    def guardar_reporte(self, reporte) -> List[str]:
        """
        Escribe report.json, tiempos.json y, si existen, decay.csv,
        defect.csv y un zeroset_<n>.csv por iterado.

        Returns:
            List[str]: Rutas escritas
        """
        rutas = [
            self.guardar_json('report.json', reporte.to_dict()),
            self.guardar_json('tiempos.json', reporte.tiempos),
        ]

        if reporte.decaimiento is not None:
            filas = [[f.iteracion, f.sup_dist_p, f.sup_dist_q, f.tamano_muestra]
                     for f in reporte.decaimiento.filas]
            rutas.append(self.guardar_csv('decay.csv', COLUMNAS_DECAIMIENTO, filas))

            for n, muestra in sorted(reporte.decaimiento.muestras.items()):
                if not len(muestra.puntos):
                    continue
                dimension = muestra.puntos.shape[-1]
                columnas = [f"{parte}{i + 1}" for i in range(dimension) for parte in ('re', 'im')]
                filas = [intercalar(z) + [float(r)] for z, r in zip(muestra.puntos, muestra.residuos)]
                rutas.append(self.guardar_csv(f'zeroset_{n}.csv', columnas + ['residual'], filas))

        if reporte.defectos:
            filas = []
            for n, defecto in sorted(reporte.defectos.items()):
                comp = defecto.componentes
                filas.append([n, defecto.min_total,
                              comp.componente_g if comp else '',
                              comp.componente_fibra if comp else '',
                              defecto.starts])
            rutas.append(self.guardar_csv('defect.csv', COLUMNAS_DEFECTO, filas))

        logger.info("Resultados guardados en %s (%d archivos)", self.directorio, len(rutas))
        return rutas

    def __repr__(self):
        return f"RepositorioResultados(directorio={self.directorio!r})"
