"""
Orquestación de experimentos: configuración, pipeline del contraejemplo y
suites de comprobación.

El pipeline construye φ_a, lo verifica, construye σ_b con p = σ(P) y
q = σ(Q), conjuga ψ = σ∘φ∘σ⁻¹ y mide para cada iterado del calendario la
localización de Σ_n, el mínimo del defecto y el certificado de separación.
"""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from contacto import (
    cocycle_scaling,
    conjugate,
    error_jacobiano,
    factor_escala_directo,
    iterate,
    residuo_contacto,
    volume_distortion,
)
from errores import ErrorConsistencia, ErrorEtapa, ErrorParametro
from esfera import espaciado_vecinos, muestrear_esfera, normalizar
from moebius import (
    Conjugador,
    build_conjugator,
    factor_escala_matriz,
    fixed_point_spectrum,
    mapa_focal,
    potencia_conjugada,
)
from puntos_trasladados import (
    ReporteDecaimiento,
    ReporteDefecto,
    ReporteSeparacion,
    constantes_localizacion,
    decay_table,
    defect,
    distancia_hausdorff,
    extract_zero_set,
    search_translated,
    separation_certificate,
    verificar_focal,
)
from verificaciones import (
    HamiltonianoInvariante,
    circle_zero_count,
    critical_points_are_translated,
    integral_circulo,
    invariant_flow,
    mapa_circulo_aleatorio,
)

logger = logging.getLogger(__name__)

SUITES = ('verify', 'spectrum', 'decay', 'search', 'certify', 'circle', 'hamiltonian', 'all')
PARAMETROS_VERIFICACION = (0.3, 0.5, 0.7, 0.9)
ITERADOS_COCICLO = (2, 8, 32, 64)
MAPAS_CIRCULO = 100
TIEMPOS_HAMILTONIANO = (0.1, 1.0, np.pi)
TOLERANCIA_JACOBIANO = 1e-6
TOLERANCIA_IDENTIDADES = 1e-8

EXITO = 0
ERROR = 1
TRASLADADO = 2

TOLERANCIAS_DEFECTO = {'bisection': 1e-10, 'refinement': 1e-10, 'residual': 1e-9}


class ConfiguracionExperimento:
    """
    Parámetros de un experimento (ExperimentConfig).

    Las claves coinciden con las del archivo JSON; cualquier otra clave se rechaza.
    """

    CLAVES = ('n', 'a', 'b', 'iterate_schedule', 'grid', 'starts', 'seed', 'tolerances',
              'output_dir', 'workers', 'defect_threshold', 'translated_threshold',
              'certificate_radius', 'verification_samples', 'fiber_margin_threshold')

    def __init__(self, n: int = 2, a: float = 0.5, b: float = 0.5,
                 iterate_schedule: Optional[List[int]] = None, grid: int = 200_000,
                 starts: int = 64, seed: int = 12345, tolerances: Optional[dict] = None,
                 output_dir: str = "resultados", workers: int = 1,
                 defect_threshold: float = 1e-3, translated_threshold: float = 1e-8,
                 certificate_radius: float = 0.2, verification_samples: int = 1000,
                 fiber_margin_threshold: float = 0.5):
        if not isinstance(n, int) or n < 2:
            raise ErrorParametro("n debe ser un entero ≥ 2")
        if not (0.0 < a < 1.0):
            raise ErrorParametro("a debe estar en (0, 1)")
        if not (0.0 < b < 1.0):
            raise ErrorParametro("b debe estar en (0, 1)")
        if grid < 1000:
            raise ErrorParametro("grid debe ser ≥ 1000")
        if starts < 1:
            raise ErrorParametro("starts debe ser ≥ 1")
        if workers < 1:
            raise ErrorParametro("workers debe ser ≥ 1")
        if certificate_radius <= 0.0:
            raise ErrorParametro("certificate_radius debe ser positivo")
        if verification_samples < 1:
            raise ErrorParametro("verification_samples debe ser ≥ 1")
        if fiber_margin_threshold < 0.0:
            raise ErrorParametro("fiber_margin_threshold no puede ser negativo")

        calendario = list(iterate_schedule) if iterate_schedule is not None else [1, 2, 4, 8, 12, 16]
        if not calendario or any(not isinstance(k, int) or k < 1 for k in calendario):
            raise ErrorParametro("iterate_schedule debe ser una lista no vacía de enteros ≥ 1")

        tolerancias = dict(TOLERANCIAS_DEFECTO)
        if tolerances is not None:
            desconocidas = set(tolerances) - set(TOLERANCIAS_DEFECTO)
            if desconocidas:
                raise ErrorParametro(f"Tolerancias desconocidas: {sorted(desconocidas)}")
            tolerancias.update({k: float(v) for k, v in tolerances.items()})
        if any(v <= 0.0 for v in tolerancias.values()):
            raise ErrorParametro("Las tolerancias deben ser positivas")

        self.n = n
        self.a = float(a)
        self.b = float(b)
        self.iterate_schedule = sorted(set(calendario))
        self.grid = int(grid)
        self.starts = int(starts)
        self.seed = int(seed)
        self.tolerances = tolerancias
        self.output_dir = str(output_dir)
        self.workers = int(workers)
        self.defect_threshold = float(defect_threshold)
        self.translated_threshold = float(translated_threshold)
        self.certificate_radius = float(certificate_radius)
        self.verification_samples = int(verification_samples)
        self.fiber_margin_threshold = float(fiber_margin_threshold)

    def to_dict(self) -> dict:
        return {clave: getattr(self, clave) for clave in self.CLAVES}

    @classmethod
    def from_dict(cls, data: dict) -> 'ConfiguracionExperimento':
        """
        Raises:
            ErrorParametro: Si hay claves desconocidas o valores inválidos
        """
        desconocidas = set(data) - set(cls.CLAVES)
        if desconocidas:
            raise ErrorParametro(f"Claves de configuración desconocidas: {sorted(desconocidas)}")
        return cls(**data)

    @classmethod
    def cargar_json(cls, ruta_archivo: str) -> 'ConfiguracionExperimento':
        """
        Carga la configuración desde un archivo JSON.

        Raises:
            IOError: Si el archivo no existe o no puede leerse
            ValueError: Si el JSON es inválido o contiene claves desconocidas
        """
        try:
            with open(ruta_archivo, 'r', encoding='utf-8') as f:
                datos = json.load(f)
        except FileNotFoundError:
            raise IOError(f"Archivo no encontrado: {ruta_archivo}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Error al decodificar JSON: {e}")
        if not isinstance(datos, dict):
            raise ValueError("La configuración debe ser un objeto JSON")
        return cls.from_dict(datos)

    def con_cambios(self, **cambios) -> 'ConfiguracionExperimento':
        """Copia con los valores dados (los None se ignoran)."""
        datos = self.to_dict()
        datos.update({k: v for k, v in cambios.items() if v is not None})
        return ConfiguracionExperimento.from_dict(datos)

    def __repr__(self):
        return f"ConfiguracionExperimento(n={self.n}, a={self.a}, b={self.b}, grid={self.grid})"


ExperimentConfig = ConfiguracionExperimento


@dataclass
class ReportePipeline:
    """
    Resultado de un pipeline o de una suite (PipelineReport).

    Los tiempos se guardan aparte para que to_dict sea reproducible bit a bit.
    """
    configuracion: dict
    suite: str
    verificacion: Dict[str, dict] = field(default_factory=dict)
    espectros: List[dict] = field(default_factory=list)
    conjugador: Optional[dict] = None
    focal: Optional[dict] = None
    constantes: Optional[dict] = None
    decaimiento: Optional[ReporteDecaimiento] = None
    defectos: Dict[int, ReporteDefecto] = field(default_factory=dict)
    certificados: Dict[int, ReporteSeparacion] = field(default_factory=dict)
    circulo: Optional[dict] = None
    hamiltoniano: Optional[dict] = None
    tiempos: Dict[str, float] = field(default_factory=dict)
    codigo_salida: int = ERROR
    conclusion: str = ""

    def to_dict(self) -> dict:
        return {
            'configuracion': self.configuracion,
            'suite': self.suite,
            'verificacion': self.verificacion,
            'espectros': self.espectros,
            'conjugador': self.conjugador,
            'focal': self.focal,
            'constantes': self.constantes,
            'decaimiento': self.decaimiento.to_dict() if self.decaimiento else None,
            'defectos': {str(n): r.to_dict() for n, r in sorted(self.defectos.items())},
            'certificados': {str(n): r.to_dict() for n, r in sorted(self.certificados.items())},
            'circulo': self.circulo,
            'hamiltoniano': self.hamiltoniano,
            'codigo_salida': self.codigo_salida,
            'conclusion': self.conclusion,
            'naturaleza': 'evidencia numérica',
        }


PipelineReport = ReportePipeline


@contextmanager
def _etapa(nombre: str, tiempos: Dict[str, float]):
    """Cronometra una etapa y envuelve cualquier fallo en ErrorEtapa."""
    inicio = time.perf_counter()
    logger.info("Etapa '%s'", nombre)
    try:
        yield
    except ErrorEtapa:
        raise
    except Exception as e:
        logger.error("Fallo en la etapa '%s': %s", nombre, e)
        raise ErrorEtapa(nombre, e) from e
    finally:
        tiempos[nombre] = tiempos.get(nombre, 0.0) + time.perf_counter() - inicio


# ----------------------------------------------------------------------------
# Piezas del pipeline

def bateria_contacto(phi, muestras: int, seed: int) -> dict:
    """Residuo de contacto y error del jacobiano sobre puntos aleatorios."""
    Z = muestrear_esfera(phi.n, muestras, seed)
    return {
        'residuo_max': float(np.max(residuo_contacto(phi, Z))),
        'error_jacobiano_max': float(np.max(error_jacobiano(phi, Z))),
    }


def identidades(phi, muestras: int, seed: int) -> dict:
    """Errores relativos de la identidad del cociclo y de la de volumen."""
    Z = muestrear_esfera(phi.n, muestras, seed)
    cociclo = 0.0
    for k in ITERADOS_COCICLO:
        suma = cocycle_scaling(phi, k, Z)
        directo = factor_escala_directo(iterate(phi, k), Z)
        cociclo = max(cociclo, float(np.max(np.abs(suma - directo) / np.maximum(1.0, np.abs(directo)))))
    volumen = volume_distortion(phi, Z)
    esperado = np.exp(phi.n * phi.factor_escala(Z))
    return {
        'error_cociclo': cociclo,
        'error_volumen': float(np.max(np.abs(volumen - esperado) / esperado)),
    }


def identidad_cerrada(phi, sigma, muestras: int, seed: int) -> float:
    """
    Error relativo entre el cociclo de ψ = σ∘φ∘σ⁻¹ y la forma cerrada
    −2 ln|(S Mᵏ S⁻¹ (1, z))₀|.

    El jacobiano completo de ψ_k pierde precisión con k; la forma cerrada no.
    """
    psi = conjugate(phi, sigma)
    Z = muestrear_esfera(phi.n, muestras, seed)
    error = 0.0
    for k in ITERADOS_COCICLO:
        suma = cocycle_scaling(psi, k, Z)
        cerrado = factor_escala_matriz(potencia_conjugada(phi.matriz, sigma.matriz, k), Z)
        error = max(error, float(np.max(np.abs(suma - cerrado) / np.maximum(1.0, np.abs(cerrado)))))
    return error


def _construir(config: ConfiguracionExperimento, reporte: ReportePipeline):
    """Etapas focal, conjugador y conjugación; devuelve (ψ, conjugador)."""
    tiempos = reporte.tiempos
    with _etapa('focal', tiempos):
        phi = mapa_focal(config.a, config.n)
        bateria = bateria_contacto(phi, config.verification_samples, config.seed)
        if bateria['residuo_max'] > config.tolerances['residual']:
            raise ErrorConsistencia(f"Residuo de contacto {bateria['residuo_max']:.3e}")
        reporte.verificacion[f"a={config.a}"] = bateria
        reporte.espectros = [e.to_dict() for e in fixed_point_spectrum(phi)]

    with _etapa('conjugador', tiempos):
        conjugador: Conjugador = build_conjugator(config.b, config.n)
        reporte.conjugador = conjugador.to_dict()

    with _etapa('conjugacion', tiempos):
        psi = conjugate(phi, conjugador.sigma)
        focal = verificar_focal(psi, conjugador.p, conjugador.q, seed=config.seed)
        reporte.focal = focal.to_dict()
        if not focal.es_focal:
            raise ErrorConsistencia("ψ no es focal para (p, q)")
        r = config.certificate_radius
        reporte.constantes = constantes_localizacion(psi, conjugador.p, conjugador.q, r, r,
                                             seed=config.seed).to_dict()
    return psi, conjugador


def _decaimiento(psi, conjugador: Conjugador, config: ConfiguracionExperimento,
                 reporte: ReportePipeline, estabilidad: bool = False):
    with _etapa('decaimiento', reporte.tiempos):
        tabla = decay_table(psi, conjugador.p, conjugador.q, config.iterate_schedule,
                            config.grid, config.seed, config.tolerances['bisection'], validar=False)
        if estabilidad:
            n = config.iterate_schedule[0]
            otra = extract_zero_set(psi, n, config.grid, config.seed + 1,
                                    config.tolerances['bisection'], repulsor=conjugador.p)
            muestra = tabla.muestras[n]
            tabla.estabilidad = {
                'n': n,
                'hausdorff': distancia_hausdorff(muestra.todos(), otra.todos()),
                'espaciado_rejilla': espaciado_vecinos(muestrear_esfera(psi.n, config.grid, config.seed)),
            }
        reporte.decaimiento = tabla


def _busqueda(psi, config: ConfiguracionExperimento, reporte: ReportePipeline):
    with _etapa('busqueda', reporte.tiempos):
        for n in config.iterate_schedule:
            reporte.defectos[n] = search_translated(
                iterate(psi, n), config.starts, config.grid, config.seed,
                config.tolerances['refinement'], config.workers)


def _certificado(psi, conjugador: Conjugador, config: ConfiguracionExperimento,
                 reporte: ReportePipeline):
    r = config.certificate_radius
    with _etapa('certificado', reporte.tiempos):
        for n in config.iterate_schedule:
            certificado = separation_certificate(psi, n, conjugador.p, conjugador.q, r, r,
                                                 config.grid, config.seed,
                                                 config.tolerances['bisection'])
            reporte.certificados[n] = certificado
            if n in reporte.defectos:
                reporte.defectos[n].certified = certificado.certificado


def _concluir(config: ConfiguracionExperimento, reporte: ReportePipeline):
    """
    Código de salida a partir del mayor iterado del calendario.

    Un certificado solo cuenta si además su margen de fibra alcanza
    `fiber_margin_threshold`.
    """
    n = config.iterate_schedule[-1]
    defecto_n = reporte.defectos.get(n)
    certificado = reporte.certificados.get(n)
    valido = (certificado is not None and certificado.certificado
              and certificado.margen_fibra >= config.fiber_margin_threshold)

    if defecto_n is not None and defecto_n.min_total <= config.translated_threshold:
        reporte.codigo_salida = TRASLADADO
        reporte.conclusion = f"punto trasladado encontrado para n={n}"
    elif defecto_n is not None and defecto_n.min_total >= config.defect_threshold and (
            valido if certificado is not None else reporte.suite == 'search'):
        reporte.codigo_salida = EXITO
        reporte.conclusion = f"evidencia de que ψ_{n} no tiene puntos trasladados"
    elif defecto_n is None and valido:
        reporte.codigo_salida = EXITO
        reporte.conclusion = f"certificado de separación válido para n={n}"
    else:
        reporte.codigo_salida = ERROR
        reporte.conclusion = f"resultado no concluyente para n={n}"
    logger.info("Conclusión: %s (código %d)", reporte.conclusion, reporte.codigo_salida)


# ----------------------------------------------------------------------------
# Operaciones

def run_counterexample(config: ConfiguracionExperimento) -> ReportePipeline:
    """
    Pipeline completo del contraejemplo.

    Raises:
        ErrorEtapa: Si alguna etapa falla (con el nombre de la etapa)
    """
    reporte = ReportePipeline(config.to_dict(), 'run')
    psi, conjugador = _construir(config, reporte)
    _decaimiento(psi, conjugador, config, reporte)
    _busqueda(psi, config, reporte)
    _certificado(psi, conjugador, config, reporte)
    _concluir(config, reporte)
    return reporte


def _suite_verify(config: ConfiguracionExperimento, reporte: ReportePipeline):
    with _etapa('verify', reporte.tiempos):
        correcto = True
        for a in PARAMETROS_VERIFICACION:
            phi = mapa_focal(a, config.n)
            resultado = bateria_contacto(phi, config.verification_samples, config.seed)
            resultado.update(identidades(phi, min(100, config.verification_samples), config.seed))
            reporte.verificacion[f"a={a}"] = resultado
            correcto &= (resultado['residuo_max'] <= config.tolerances['residual']
                         and resultado['error_jacobiano_max'] <= TOLERANCIA_JACOBIANO
                         and resultado['error_cociclo'] <= TOLERANCIA_IDENTIDADES
                         and resultado['error_volumen'] <= TOLERANCIA_IDENTIDADES)

        conjugador = build_conjugator(config.b, config.n)
        phi = mapa_focal(config.a, config.n)
        psi = conjugate(phi, conjugador.sigma)
        resultado = bateria_contacto(psi, config.verification_samples, config.seed)
        resultado['error_cociclo_cerrado'] = identidad_cerrada(
            phi, conjugador.sigma, min(100, config.verification_samples), config.seed)
        reporte.verificacion['conjugado'] = resultado
        correcto &= (resultado['residuo_max'] <= config.tolerances['residual']
                     and resultado['error_cociclo_cerrado'] <= TOLERANCIA_IDENTIDADES)

    reporte.codigo_salida = EXITO if correcto else ERROR
    reporte.conclusion = "condición de contacto verificada" if correcto else "residuos fuera de tolerancia"


def _suite_spectrum(config: ConfiguracionExperimento, reporte: ReportePipeline):
    with _etapa('spectrum', reporte.tiempos):
        reporte.espectros = [e.to_dict() for e in fixed_point_spectrum(mapa_focal(config.a, config.n))]
    reporte.codigo_salida = EXITO
    reporte.conclusion = "espectro en los puntos fijos con estructura (c², c)"


def _suite_circle(config: ConfiguracionExperimento, reporte: ReportePipeline):
    with _etapa('circle', reporte.tiempos):
        rng = np.random.default_rng(config.seed)
        cantidades, errores_integral = [], []
        for _ in range(MAPAS_CIRCULO):
            phi = mapa_circulo_aleatorio(rng)
            cantidades.append(circle_zero_count(phi, 1024).cantidad)
            errores_integral.append(abs(integral_circulo(phi) - 2.0 * np.pi))
        con_dos = sum(c >= 2 for c in cantidades)
        reporte.circulo = {
            'mapas': MAPAS_CIRCULO,
            'con_dos_ceros': con_dos,
            'minimo_ceros': min(cantidades),
            'error_integral_max': max(errores_integral),
        }
    correcto = con_dos == MAPAS_CIRCULO and max(errores_integral) <= 1e-6
    reporte.codigo_salida = EXITO if correcto else ERROR
    reporte.conclusion = f"{con_dos}/{MAPAS_CIRCULO} mapas con al menos dos ceros"


def _suite_hamiltonian(config: ConfiguracionExperimento, reporte: ReportePipeline):
    with _etapa('hamiltonian', reporte.tiempos):
        H = HamiltonianoInvariante([1.0, 2.0])
        criticos = critical_points_are_translated(H, TIEMPOS_HAMILTONIANO, seed=config.seed)
        sonda = normalizar(np.array([1.0, 1.0], dtype=complex))
        defecto_sonda = defect(invariant_flow(H, 1.0), sonda).total
        reporte.hamiltoniano = {
            'pesos': H.pesos.tolist(),
            'tiempos': list(TIEMPOS_HAMILTONIANO),
            'criticos': criticos.to_dict(),
            'defecto_no_critico': defecto_sonda,
        }
    correcto = criticos.cumple and defecto_sonda >= 1e-2
    reporte.codigo_salida = EXITO if correcto else ERROR
    reporte.conclusion = "los puntos críticos de H son trasladados" if correcto else "fallo en los puntos críticos"


def run_suite(which: str, config: ConfiguracionExperimento) -> ReportePipeline:
    """
    Ejecuta una suite: verify, spectrum, decay, search, certify, circle,
    hamiltonian o all (pipeline completo más las comprobaciones auxiliares).

    Raises:
        ErrorParametro: Si el nombre de la suite es desconocido
        ErrorEtapa: Si alguna etapa falla
    """
    if which not in SUITES:
        raise ErrorParametro(f"Suite desconocida '{which}'; opciones: {', '.join(SUITES)}")

    if which == 'all':
        reporte = run_counterexample(config)
        reporte.suite = 'all'
        codigo, conclusion = reporte.codigo_salida, reporte.conclusion
        for suite in (_suite_verify, _suite_circle, _suite_hamiltonian):
            suite(config, reporte)
            if reporte.codigo_salida != EXITO:
                codigo = ERROR
        reporte.codigo_salida, reporte.conclusion = codigo, conclusion
        return reporte

    reporte = ReportePipeline(config.to_dict(), which)
    if which == 'verify':
        _suite_verify(config, reporte)
    elif which == 'spectrum':
        _suite_spectrum(config, reporte)
    elif which == 'circle':
        _suite_circle(config, reporte)
    elif which == 'hamiltonian':
        _suite_hamiltonian(config, reporte)
    else:
        psi, conjugador = _construir(config, reporte)
        if which == 'decay':
            _decaimiento(psi, conjugador, config, reporte, estabilidad=True)
            filas = reporte.decaimiento.filas
            reporte.codigo_salida = EXITO if all(f.tamano_muestra > 0 or f.no_resueltos > 0
                                                 for f in filas) else ERROR
            reporte.conclusion = "tabla de decaimiento completa"
        elif which == 'search':
            _busqueda(psi, config, reporte)
            _concluir(config, reporte)
        else:
            _certificado(psi, conjugador, config, reporte)
            _concluir(config, reporte)
    return reporte
