"""
Programa principal con interfaz de línea de comandos para los experimentos
de contactomorfismos sin puntos trasladados.

Uso:
    python main.py run --config configuracion_ejemplo.json --out resultados
    python main.py verify --a 0.5
    python main.py circle --seed 7

Códigos de salida: 0 evidencia, 2 punto trasladado encontrado, 1 error o
resultado no concluyente.
"""

import argparse
import logging
import sys
from typing import List, Optional

from errores import ErrorEtapa
from experimentos import ERROR, ConfiguracionExperimento, run_counterexample, run_suite
from repositorio import RepositorioResultados
from tablas import FormateadorResultados

logger = logging.getLogger(__name__)

SUBCOMANDOS = {
    'verify': "Batería de la condición de contacto y del jacobiano",
    'spectrum': "Multiplicadores en los puntos fijos de φ_a",
    'decay': "Tabla de localización del conjunto cero Σ_n",
    'search': "Búsqueda multiarranque de puntos trasladados",
    'certify': "Certificado de separación por dos bolas",
    'circle': "Caso de la circunferencia",
    'hamiltonian': "Hamiltonianos invariantes por Reeb",
    'run': "Pipeline completo del contraejemplo",
    'all': "Pipeline completo y comprobaciones auxiliares",
}


def crear_parser() -> argparse.ArgumentParser:
    """Construye el parser con un subcomando por suite y las opciones comunes."""
    comunes = argparse.ArgumentParser(add_help=False)
    comunes.add_argument('--config', help="Archivo JSON de configuración")
    comunes.add_argument('--seed', type=int, help="Semilla maestra")
    comunes.add_argument('--grid', type=int, help="Tamaño de la rejilla")
    comunes.add_argument('--out', help="Directorio de salida")
    comunes.add_argument('--n', type=int, help="Dimensión compleja")
    comunes.add_argument('--a', type=float, help="Parámetro del mapa focal")
    comunes.add_argument('--b', type=float, help="Parámetro del conjugador")
    comunes.add_argument('--starts', type=int, help="Arranques del refinamiento")
    comunes.add_argument('--workers', type=int, help="Procesos para el refinamiento")
    comunes.add_argument('--schedule', type=int, nargs='+', help="Iterados a examinar")
    comunes.add_argument('-v', '--verbose', action='store_true', help="Registro detallado")

    parser = argparse.ArgumentParser(
        prog='contactomorfismos',
        description="Experimentos numéricos sobre puntos trasladados en S^{2n-1}")
    subparsers = parser.add_subparsers(dest='comando', required=True)
    for nombre, ayuda in SUBCOMANDOS.items():
        subparsers.add_parser(nombre, parents=[comunes], help=ayuda)
    return parser


class SistemaExperimentos:
    """
    Coordina la configuración, la ejecución de la suite, la escritura de
    resultados y la salida por consola.
    """

    def __init__(self, args: argparse.Namespace):
        """Construye la configuración: archivo JSON y, encima, las opciones de la línea de comandos."""
        self.comando = args.comando
        base = (ConfiguracionExperimento.cargar_json(args.config)
                if args.config else ConfiguracionExperimento())
        self.config = base.con_cambios(
            seed=args.seed, grid=args.grid, output_dir=args.out, n=args.n, a=args.a,
            b=args.b, starts=args.starts, workers=args.workers, iterate_schedule=args.schedule)

    def ejecutar(self) -> int:
        """Ejecuta el subcomando, guarda los resultados y devuelve el código de salida."""
        logger.info("Comando '%s' con %r", self.comando, self.config)
        if self.comando == 'run':
            reporte = run_counterexample(self.config)
        else:
            reporte = run_suite(self.comando, self.config)

        repositorio = RepositorioResultados(self.config.output_dir)
        rutas = repositorio.guardar_reporte(reporte)
        self.mostrar(reporte.to_dict(), reporte.tiempos)
        print(f"✓ {len(rutas)} archivos escritos en '{self.config.output_dir}'")
        return reporte.codigo_salida

    def mostrar(self, datos: dict, tiempos: dict):
        """Imprime las tablas que correspondan al reporte."""
        if datos['espectros']:
            print(FormateadorResultados.mostrar_espectros(datos['espectros']))
        if datos['decaimiento']:
            print(FormateadorResultados.mostrar_decaimiento(datos['decaimiento']))
        if datos['defectos'] or datos['certificados']:
            print(FormateadorResultados.mostrar_defectos(datos['defectos'], datos['certificados']))
        print(FormateadorResultados.mostrar_resumen(datos, tiempos))


def main(argv: Optional[List[str]] = None) -> int:
    """Función principal: interpreta los argumentos y devuelve el código de salida."""
    args = crear_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return SistemaExperimentos(args).ejecutar()
    except ErrorEtapa as e:
        print(f"✗ Error en la etapa '{e.etapa}': {e.causa}")
    except (ValueError, IOError) as e:
        print(f"✗ Error: {e}")
    except Exception as e:
        logger.exception("Error inesperado")
        print(f"✗ Error inesperado: {e}")
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
