"""
Motor de búsqueda de puntos trasladados.

Un punto z es trasladado para φ si g(z) = 0 y φ(z) está en la órbita de Reeb
de z (la fibra de Hopf). Este módulo implementa el funcional de defecto, la
extracción del conjunto cero Σ_n = {g_n = 0}, la tabla de localización de
Σ_n, la búsqueda multiarranque y el certificado de separación por dos bolas.

Todo lo que se concluye aquí es evidencia numérica, no una demostración.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.spatial import cKDTree

from contacto import MapaContacto, cocycle_scaling, iterate
from errores import ErrorParametro
from esfera import (
    PuntoEsfera,
    a_complejo,
    a_real,
    ambient_distance,
    coordenadas,
    fase_optima,
    fiber_distance,
    marco_tangente,
    muestrear_bola,
    muestrear_esfera,
    normalizar,
)

logger = logging.getLogger(__name__)

TOLERANCIA_BISECCION = 1e-10
RESOLUCION_ARCO = 1e-15
VECINOS = 8
MINIMO_RAICES = 16
RAYOS = 256
MAX_BISECCIONES = 80


# ----------------------------------------------------------------------------
# Tipos

@dataclass(frozen=True)
class ValorDefecto:
    """
    Defecto D = g² + d_FS² de un punto (DefectValue).

    Atributos:
        componente_g (float): Factor de escala en z
        componente_fibra (float): Distancia de Fubini–Study entre z y φ(z)
        total (float): Suma de cuadrados
    """
    componente_g: float
    componente_fibra: float
    total: float

    def to_dict(self) -> dict:
        return {
            'componente_g': self.componente_g,
            'componente_fibra': self.componente_fibra,
            'total': self.total,
        }


DefectValue = ValorDefecto


@dataclass
class MuestraConjuntoCero:
    """
    Muestra del conjunto cero Σ_n (ZeroSetSample).

    Atributos:
        puntos (np.ndarray): Raíces con |g_n| ≤ tolerancia, forma (m, n)
        residuos (np.ndarray): |g_n| en cada raíz
        iteracion (int): Iterado n
        no_resueltos (np.ndarray): Raíces cuya bisección agotó la resolución del arco
        aviso (bool): No se detectó ningún cambio de signo
        mensaje (str): Explicación del aviso
    """
    puntos: np.ndarray
    residuos: np.ndarray
    iteracion: int
    no_resueltos: np.ndarray
    aviso: bool = False
    mensaje: str = ""

    @property
    def vacia(self) -> bool:
        return len(self.puntos) == 0

    def todos(self) -> np.ndarray:
        """Raíces resueltas seguidas de las no resueltas."""
        return np.concatenate([self.puntos, self.no_resueltos], axis=0)

    def to_dict(self) -> dict:
        return {
            'iteracion': self.iteracion,
            'tamano': len(self.puntos),
            'no_resueltos': len(self.no_resueltos),
            'residuo_max': float(np.max(self.residuos)) if len(self.residuos) else None,
            'aviso': self.aviso,
            'mensaje': self.mensaje,
        }


ZeroSetSample = MuestraConjuntoCero


@dataclass
class FilaDecaimiento:
    """Una fila de la tabla de decaimiento (iterado n)."""
    iteracion: int
    sup_dist_p: float
    sup_dist_q: float
    tamano_muestra: int
    no_resueltos: int = 0
    aviso: bool = False
    resolucion_limitada: bool = False

    def to_dict(self) -> dict:
        return {
            'n': self.iteracion,
            'sup_dist_sigma_p': _flotante(self.sup_dist_p),
            'sup_dist_imagen_q': _flotante(self.sup_dist_q),
            'tamano_muestra': self.tamano_muestra,
            'no_resueltos': self.no_resueltos,
            'aviso': self.aviso,
            'resolucion_limitada': self.resolucion_limitada,
        }


@dataclass
class ReporteDecaimiento:
    """Tabla de localización de Σ_n (DecayReport)."""
    filas: List[FilaDecaimiento] = field(default_factory=list)
    muestras: Dict[int, MuestraConjuntoCero] = field(default_factory=dict)
    estabilidad: Optional[dict] = None

    def fila(self, n: int) -> Optional[FilaDecaimiento]:
        for f in self.filas:
            if f.iteracion == n:
                return f
        return None

    def to_dict(self) -> dict:
        datos = {'filas': [f.to_dict() for f in self.filas]}
        if self.estabilidad is not None:
            datos['estabilidad'] = self.estabilidad
        return datos


DecayReport = ReporteDecaimiento


@dataclass
class ReporteDefecto:
    """
    Resultado de la búsqueda multiarranque (DefectReport).

    Atributos:
        min_total (float): Mínimo global del defecto (rejilla y refinamiento)
        argmin (PuntoEsfera): Punto donde se alcanza
        starts (int): Número de arranques refinados
        tolerancia_refinamiento (float): Diámetro del símplex pedido
        grid (int): Tamaño de la rejilla
        certified (bool): El certificado de separación también se cumple
        min_rejilla (float): Mínimo sobre la rejilla
        convergido (bool): Todos los refinamientos terminaron por tolerancia
        evaluaciones (int): Evaluaciones del defecto en el refinamiento
    """
    min_total: float
    argmin: PuntoEsfera
    starts: int
    tolerancia_refinamiento: float
    grid: int
    certified: bool = False
    min_rejilla: float = float('nan')
    convergido: bool = True
    evaluaciones: int = 0
    componentes: Optional[ValorDefecto] = None

    def to_dict(self) -> dict:
        return {
            'min_total': self.min_total,
            'argmin': self.argmin.to_dict(),
            'starts': self.starts,
            'tolerancia_refinamiento': self.tolerancia_refinamiento,
            'grid': self.grid,
            'certified': self.certified,
            'min_rejilla': self.min_rejilla,
            'convergido': self.convergido,
            'evaluaciones': self.evaluaciones,
            'componentes': self.componentes.to_dict() if self.componentes else None,
        }


DefectReport = ReporteDefecto


@dataclass
class ReporteSeparacion:
    """
    Certificado de separación por dos bolas.

    Atributos:
        certificado (bool): Las tres condiciones se cumplen
        condicion_fallida (str): 'localizacion', 'resolucion', 'contencion' o
            'margen_fibra'
        margen_g (float): min |g_n| fuera de B(p, r_p)
        contencion (float): max ‖ψ_n(z) − q‖ sobre las raíces resueltas de Σ_n
        margen_fibra (float): d_FS(p, q) − Lip·(r_p + r_q)
        lipschitz (float): Constante de Lipschitz empírica
    """
    certificado: bool
    condicion_fallida: Optional[str]
    margen_g: float
    contencion: float
    margen_fibra: float
    lipschitz: float
    iteracion: int
    r_p: float
    r_q: float

    def to_dict(self) -> dict:
        return {
            'certificado': self.certificado,
            'condicion_fallida': self.condicion_fallida,
            'margen_g': _flotante(self.margen_g),
            'contencion': _flotante(self.contencion),
            'margen_fibra': self.margen_fibra,
            'lipschitz': self.lipschitz,
            'n': self.iteracion,
            'r_p': self.r_p,
            'r_q': self.r_q,
        }


SeparationReport = ReporteSeparacion


@dataclass
class ReporteFocal:
    """Comprobación muestreada de las propiedades de mapa focal para (p, q)."""
    error_punto_fijo: float
    g_p: float
    g_q: float
    iterado_atraccion: Optional[int]
    fraccion_convergente: float

    @property
    def es_focal(self) -> bool:
        return (self.error_punto_fijo <= 1e-9 and self.g_p > 0.0 and self.g_q < 0.0
                and self.iterado_atraccion is not None and self.fraccion_convergente == 1.0)

    def to_dict(self) -> dict:
        return {
            'error_punto_fijo': self.error_punto_fijo,
            'g_p': self.g_p,
            'g_q': self.g_q,
            'iterado_atraccion': self.iterado_atraccion,
            'fraccion_convergente': self.fraccion_convergente,
            'es_focal': self.es_focal,
        }


@dataclass
class ConstantesLocalizacion:
    """Sustitutos medidos de las constantes de localización (M, δ, N)."""
    M: float
    delta: float
    N: Optional[int]
    umbral: Optional[float]

    def to_dict(self) -> dict:
        return {'M': self.M, 'delta': self.delta, 'N': self.N, 'umbral': self.umbral}


@dataclass
class PruebaDirecta:
    """Prueba directa de punto trasladado: |g| y min_t ‖e^{it}z − φ(z)‖."""
    g: float
    distancia_reeb: float
    t: float
    es_trasladado: bool

    def to_dict(self) -> dict:
        return {'g': self.g, 'distancia_reeb': self.distancia_reeb,
                't': self.t, 'es_trasladado': self.es_trasladado}


def _flotante(x: float) -> Optional[float]:
    return None if x is None or not np.isfinite(x) else float(x)


# ----------------------------------------------------------------------------
# Funcional de defecto

def defecto_lote(phi: MapaContacto, Z) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g, d_FS, g² + d_FS²) vectorizado sobre un lote de puntos."""
    Z = coordenadas(Z)
    g = phi.factor_escala(Z)
    d = fiber_distance(Z, phi.aplicar(Z))
    return g, d, g * g + d * d


def defect(phi: MapaContacto, z) -> ValorDefecto:
    """Defecto de punto trasladado en z."""
    g, d, total = defecto_lote(phi, coordenadas(z))
    return ValorDefecto(float(g), float(d), float(total))


def prueba_directa_trasladado(phi: MapaContacto, z, tol_g: float = 1e-10,
                              tol_reeb: float = 1e-8) -> PruebaDirecta:
    """
    Comprueba las dos condiciones por separado: |g(z)| ≤ tol_g y
    min_t ‖e^{it}z − φ(z)‖ ≤ tol_reeb (fase cerrada y minimización 1D).
    """
    Z = coordenadas(z)
    W = phi.aplicar(Z)
    g = float(phi.factor_escala(Z))

    u = complex(fase_optima(Z, W))
    t_cerrado = float(np.angle(u))
    d_cerrado = float(np.linalg.norm(u * Z - W))

    resultado = minimize_scalar(lambda t: np.linalg.norm(np.exp(1j * t) * Z - W),
                                bounds=(t_cerrado - np.pi, t_cerrado + np.pi), method='bounded',
                                options={'xatol': 1e-12})
    if resultado.fun < d_cerrado:
        t, distancia = float(resultado.x), float(resultado.fun)
    else:
        t, distancia = t_cerrado, d_cerrado

    return PruebaDirecta(g, distancia, t, abs(g) <= tol_g and distancia <= tol_reeb)


# ----------------------------------------------------------------------------
# Conjunto cero

def _biseccion(phi: MapaContacto, n: int, A, B, gA, tol: float):
    """
    Bisección vectorizada sobre arcos [A, B] con g_n(A)·g_n(B) < 0.

    Returns:
        (raíces, residuos, no_resueltos)
    """
    A, B, gA = A.copy(), B.copy(), gA.copy()
    activos = np.ones(len(A), dtype=bool)
    raices, residuos, pendientes = [], [], []

    for _ in range(MAX_BISECCIONES):
        if not np.any(activos):
            break
        idx = np.flatnonzero(activos)
        M = normalizar(A[idx] + B[idx])
        gM = cocycle_scaling(phi, n, M)

        hecho = np.abs(gM) <= tol
        raices.append(M[hecho])
        residuos.append(np.abs(gM[hecho]))
        activos[idx[hecho]] = False

        seguir = ~hecho
        mismo = np.sign(gM) == np.sign(gA[idx])
        izq = idx[seguir & mismo]
        der = idx[seguir & ~mismo]
        A[izq], gA[izq] = M[seguir & mismo], gM[seguir & mismo]
        B[der] = M[seguir & ~mismo]

        agotado = idx[seguir][ambient_distance(A[idx[seguir]], B[idx[seguir]]) <= RESOLUCION_ARCO]
        if len(agotado):
            pendientes.append(A[agotado])
            activos[agotado] = False

    if np.any(activos):
        pendientes.append(A[activos])

    vacio = np.empty((0, A.shape[-1]), dtype=complex)
    return (np.concatenate(raices) if raices else vacio,
            np.concatenate(residuos) if residuos else np.empty(0),
            np.concatenate(pendientes) if pendientes else vacio)


def _pares_cambio_signo(X: np.ndarray, G: np.ndarray, tol: float, k: int) -> np.ndarray:
    if len(X) < 2:
        return np.empty((0, 2), dtype=int)
    vecinos = min(k + 1, len(X))
    _, idx = cKDTree(X).query(X, k=vecinos)
    i = np.repeat(np.arange(len(X)), vecinos - 1)
    j = idx[:, 1:].ravel()
    cambio = (G[i] * G[j] < 0.0) & (np.abs(G[i]) > tol) & (np.abs(G[j]) > tol)
    pares = np.sort(np.stack([i[cambio], j[cambio]], axis=1), axis=1)
    return np.unique(pares, axis=0) if len(pares) else pares.reshape(0, 2)


def _centro_positivo(phi: MapaContacto, n: int, Z, G, repulsor, tol: float, semilla) -> Optional[np.ndarray]:
    """Busca un punto con g_n > tol acercándose con casquetes cada vez menores."""
    candidatos = [Z[np.argmax(G)]]
    if repulsor is not None:
        candidatos.append(coordenadas(repulsor))
    C = np.array(candidatos)
    GC = cocycle_scaling(phi, n, C)
    c, gc = C[np.argmax(GC)], float(np.max(GC))

    radio = 0.5
    while gc <= tol and radio > 1e-12:
        muestra = muestrear_bola(c, radio, 64, semilla)
        gm = cocycle_scaling(phi, n, muestra)
        if np.max(gm) > gc:
            c, gc = muestra[np.argmax(gm)], float(np.max(gm))
        else:
            radio /= 2.0
    return c if gc > tol else None


def _rayos(phi: MapaContacto, n: int, c, cantidad: int, tol: float, semilla):
    """Rayos geodésicos desde c hasta puntos ortogonales; se bisecan los que cambian de signo."""
    rng = semilla if isinstance(semilla, np.random.Generator) else np.random.default_rng(semilla)
    marco = marco_tangente(c)
    direcciones = rng.standard_normal((cantidad, marco.shape[-1])) @ marco.T
    extremos = a_complejo(direcciones / np.linalg.norm(direcciones, axis=-1, keepdims=True))

    gE = cocycle_scaling(phi, n, extremos)
    negativos = gE < -tol
    if not np.any(negativos):
        vacio = np.empty((0, c.size), dtype=complex)
        return vacio, np.empty(0), vacio
    B = extremos[negativos]
    A = np.repeat(c[None, :], len(B), axis=0)
    gA = np.repeat(cocycle_scaling(phi, n, c), len(B))
    return _biseccion(phi, n, A, B, gA, tol)


def extract_zero_set(phi: MapaContacto, n: int, grid: int, seed: int,
                     tol: float = TOLERANCIA_BISECCION, repulsor=None,
                     vecinos: int = VECINOS, minimo_raices: int = MINIMO_RAICES,
                     rayos: int = RAYOS) -> MuestraConjuntoCero:
    """
    Extrae una muestra de Σ_n = {g_n = 0}.

    Evalúa g_n (suma del cociclo) sobre una rejilla aleatoria, biseca los
    arcos entre vecinos cercanos con cambio de signo y, si las raíces son
    pocas, lanza rayos desde un punto con g_n > 0 (buscado con casquetes
    decrecientes, partiendo del máximo de la rejilla y de `repulsor`).

    Raises:
        ValueError: Si n < 1
    """
    if n < 1:
        raise ValueError("El iterado debe ser ≥ 1")

    rng = np.random.default_rng(seed)
    Z = muestrear_esfera(phi.n, grid, rng)
    G = cocycle_scaling(phi, n, Z)
    vacio = np.empty((0, phi.n), dtype=complex)

    if len(Z) == 0 or np.all(np.abs(G) <= tol):
        logger.warning("g_%d idénticamente nulo en la rejilla: sin cambio de signo", n)
        return MuestraConjuntoCero(vacio, np.empty(0), n, vacio, True,
                                   "g_n ≡ 0 en la rejilla (caso degenerado)")

    exactos = np.abs(G) <= tol
    puntos, residuos, pendientes = [Z[exactos]], [np.abs(G[exactos])], []

    pares = _pares_cambio_signo(a_real(Z), G, tol, vecinos)
    if len(pares):
        r, res, nr = _biseccion(phi, n, Z[pares[:, 0]], Z[pares[:, 1]], G[pares[:, 0]], tol)
        puntos.append(r)
        residuos.append(res)
        pendientes.append(nr)

    total = sum(len(p) for p in puntos)
    if total < minimo_raices and np.any(G < -tol):
        c = _centro_positivo(phi, n, Z, G, repulsor, tol, rng)
        if c is not None:
            r, res, nr = _rayos(phi, n, c, rayos, tol, rng)
            puntos.append(r)
            residuos.append(res)
            pendientes.append(nr)
            logger.debug("Rayos para n=%d: %d raíces, %d no resueltas", n, len(r), len(nr))

    puntos = np.concatenate(puntos)
    residuos = np.concatenate(residuos)
    no_resueltos = np.concatenate(pendientes) if pendientes else vacio

    aviso = len(puntos) == 0 and len(no_resueltos) == 0
    mensaje = "sin cambio de signo detectado (posible submuestreo)" if aviso else ""
    if len(puntos) == 0 and len(no_resueltos):
        mensaje = "todas las raíces en el límite de resolución"
    if aviso:
        logger.warning("Σ_%d vacío: %s", n, mensaje)

    logger.info("Σ_%d: %d raíces, %d no resueltas", n, len(puntos), len(no_resueltos))
    return MuestraConjuntoCero(puntos, residuos, n, no_resueltos, aviso, mensaje)


def distancia_hausdorff(A, B) -> float:
    """Distancia de Hausdorff cordal entre dos nubes de puntos (inf si alguna está vacía)."""
    XA, XB = a_real(A), a_real(B)
    if len(XA) == 0 or len(XB) == 0:
        return float('inf')
    d_ab, _ = cKDTree(XB).query(XA)
    d_ba, _ = cKDTree(XA).query(XB)
    return float(max(np.max(d_ab), np.max(d_ba)))


# ----------------------------------------------------------------------------
# Propiedades focales y localización

def verificar_focal(psi: MapaContacto, p, q, radio: float = 0.1, muestras: int = 1000,
                    seed: int = 0, max_atraccion: int = 8, iteraciones: int = 200,
                    radio_convergencia: float = 1e-6) -> ReporteFocal:
    """
    Comprueba sobre muestras que ψ es focal para (p, q): p y q fijos,
    g(p) > 0 > g(q), algún iterado ψ_m (m ≤ max_atraccion) lleva B(q, radio)
    dentro de sí misma y las órbitas aleatorias llegan a B(q, radio_convergencia).
    """
    P, Q = coordenadas(p), coordenadas(q)
    error = float(max(ambient_distance(psi.aplicar(P), P), ambient_distance(psi.aplicar(Q), Q)))
    g_p = float(psi.factor_escala(P))
    g_q = float(psi.factor_escala(Q))

    rng = np.random.default_rng(seed)
    bola = muestrear_bola(Q, radio, muestras, rng)
    iterado = None
    W = bola
    for m in range(1, max_atraccion + 1):
        W = psi.aplicar(W)
        if np.all(ambient_distance(W, Q) <= radio):
            iterado = m
            break

    Z = muestrear_esfera(psi.n, muestras, rng)
    Z = Z[ambient_distance(Z, P) > 1e-8]
    llegado = np.zeros(len(Z), dtype=bool)
    for _ in range(iteraciones):
        Z = psi.aplicar(Z)
        llegado |= ambient_distance(Z, Q) <= radio_convergencia
        if np.all(llegado):
            break
    fraccion = float(np.mean(llegado)) if len(llegado) else 1.0

    reporte = ReporteFocal(error, g_p, g_q, iterado, fraccion)
    logger.info("Propiedades focales: %s", reporte.to_dict())
    return reporte


def constantes_localizacion(psi: MapaContacto, p, q, r_p: float, r_q: float, muestras: int = 2000,
                            seed: int = 0, n_max: int = 64) -> ConstantesLocalizacion:
    """
    Sustitutos empíricos de (M, δ, N): M = sup|g| muestreado,
    δ = min(inf g en B(p, r_p), inf −g en B(q, r_q)), N = primer iterado que
    lleva la muestra del complemento de B(p, r_p) dentro de B(q, r_q).
    """
    P, Q = coordenadas(p), coordenadas(q)
    rng = np.random.default_rng(seed)
    Z = muestrear_esfera(psi.n, muestras, rng)
    M = float(np.max(np.abs(psi.factor_escala(Z))))
    delta = float(min(np.min(psi.factor_escala(muestrear_bola(P, r_p, muestras, rng))),
                      np.min(-psi.factor_escala(muestrear_bola(Q, r_q, muestras, rng)))))

    N = None
    W = Z[ambient_distance(Z, P) > r_p]
    for k in range(1, n_max + 1):
        W = psi.aplicar(W)
        if np.all(ambient_distance(W, Q) <= r_q):
            N = k
            break

    umbral = N * (1.0 + M / delta) if N is not None and delta > 0.0 else None
    return ConstantesLocalizacion(M, delta, N, umbral)


def decay_table(psi: MapaContacto, p, q, n_list: List[int], grid: int, seed: int,
                tol: float = TOLERANCIA_BISECCION, validar: bool = True) -> ReporteDecaimiento:
    """
    Para cada n mide sup_{Σ_n} ‖z − p‖ y sup_{Σ_n} ‖ψ_n(z) − q‖.

    Una fila sin raíces resueltas se marca (aviso o resolucion_limitada);
    sus distancias se calculan sobre las raíces no resueltas si las hay.

    Raises:
        ErrorParametro: Si ψ no pasa la comprobación focal para (p, q)
    """
    P, Q = coordenadas(p), coordenadas(q)
    if validar:
        focal = verificar_focal(psi, P, Q, seed=seed)
        if not focal.es_focal:
            raise ErrorParametro(f"El mapa no es focal para (p, q): {focal.to_dict()}")

    reporte = ReporteDecaimiento()
    for n in n_list:
        muestra = extract_zero_set(psi, n, grid, seed, tol, repulsor=P)
        puntos = muestra.puntos if not muestra.vacia else muestra.no_resueltos
        if len(puntos):
            imagenes = iterate(psi, n).aplicar(puntos)
            sup_p = float(np.max(ambient_distance(puntos, P)))
            sup_q = float(np.max(ambient_distance(imagenes, Q)))
        else:
            sup_p = sup_q = float('nan')

        fila = FilaDecaimiento(n, sup_p, sup_q, len(muestra.puntos), len(muestra.no_resueltos),
                               muestra.aviso, len(muestra.no_resueltos) > 0)
        logger.info("Decaimiento n=%d: %s", n, fila.to_dict())
        reporte.filas.append(fila)
        reporte.muestras[n] = muestra
    return reporte


# ----------------------------------------------------------------------------
# Búsqueda multiarranque

def _refinar(phi: MapaContacto, z0: np.ndarray, tol: float, paso: float, max_iter: int):
    """Nelder–Mead en la carta tangente x ↦ normalizar(z0 + E x), con un pulido final."""
    dim = 2 * phi.n - 1
    centro = z0
    evaluaciones = 0
    convergido = False

    for escala in (paso, paso * 1e-3):
        E = marco_tangente(centro)

        def objetivo(x, centro=centro, E=E):
            z = normalizar(centro + a_complejo(E @ x))
            return float(defecto_lote(phi, z[None, :])[2][0])

        simplex = np.vstack([np.zeros(dim), escala * np.eye(dim)])
        resultado = minimize(objetivo, np.zeros(dim), method='Nelder-Mead',
                             options={'xatol': tol, 'fatol': np.inf, 'maxiter': max_iter,
                                      'initial_simplex': simplex})
        evaluaciones += int(resultado.nfev)
        convergido = bool(resultado.success)
        centro = normalizar(centro + a_complejo(E @ resultado.x))

    valor = float(defecto_lote(phi, centro[None, :])[2][0])
    return valor, centro, convergido, evaluaciones


def search_translated(phi: MapaContacto, starts: int, grid: int, seed: int,
                      tol: float = 1e-10, workers: int = 1,
                      max_iter: Optional[int] = None) -> ReporteDefecto:
    """
    Búsqueda global de puntos trasladados minimizando el defecto.

    Los `starts` valores más bajos de la rejilla se refinan con Nelder–Mead;
    el resultado no depende del número de procesos.

    Raises:
        ErrorParametro: Si starts < 1
    """
    if starts < 1:
        raise ErrorParametro("Se necesita al menos un arranque")

    Z = muestrear_esfera(phi.n, max(grid, starts), seed)
    total = defecto_lote(phi, Z)[2]
    orden = np.argsort(total, kind='stable')[:starts]
    i_rejilla = int(orden[0])

    dim = 2 * phi.n - 1
    paso = min(0.1, 2.0 * len(Z) ** (-1.0 / dim))
    max_iter = max_iter or 400 * dim
    tareas = [(phi, Z[i], tol, paso, max_iter) for i in orden]

    if workers > 1:
        with Pool(workers) as pool:
            resultados = pool.starmap(_refinar, tareas)
    else:
        resultados = [_refinar(*t) for t in tareas]

    valores = np.array([r[0] for r in resultados])
    mejor = int(np.argmin(valores))
    min_rejilla = float(total[i_rejilla])
    if valores[mejor] <= min_rejilla:
        min_total, argmin = float(valores[mejor]), resultados[mejor][1]
    else:
        min_total, argmin = min_rejilla, Z[i_rejilla]

    convergido = all(r[2] for r in resultados)
    if not convergido:
        logger.warning("Algún refinamiento no alcanzó la tolerancia %.1e", tol)

    reporte = ReporteDefecto(min_total, PuntoEsfera(argmin), starts, tol, len(Z),
                             min_rejilla=min_rejilla, convergido=convergido,
                             evaluaciones=sum(r[3] for r in resultados),
                             componentes=defect(phi, argmin))
    logger.info("Búsqueda: min_total=%.3e (rejilla %.3e)", min_total, min_rejilla)
    return reporte


# ----------------------------------------------------------------------------
# Certificado de separación

def margen_fibra(p, q, r_p: float, r_q: float, muestras: int = 1000,
                 seed: int = 0) -> Tuple[float, float]:
    """
    Cota inferior d_FS(p, q) − Lip·(r_p + r_q) de la distancia entre fibras
    de B(p, r_p) y B(q, r_q).

    Lip se mide sobre pares muestreados de las dos bolas y se acota por π/2.

    Returns:
        (margen, lipschitz)
    """
    P, Q = coordenadas(p), coordenadas(q)
    if r_p < 0.0 or r_q < 0.0:
        raise ErrorParametro("Los radios deben ser no negativos")
    base = float(fiber_distance(P, Q))
    if r_p == 0.0 and r_q == 0.0:
        return base, 0.0

    rng = np.random.default_rng(seed)
    W = muestrear_bola(P, r_p, muestras, rng)
    V = muestrear_bola(Q, r_q, muestras, rng)
    desplazamiento = ambient_distance(W, P) + ambient_distance(V, Q)
    validos = desplazamiento > 0.0
    cociente = np.abs(fiber_distance(W, V) - base)[validos] / desplazamiento[validos]
    lip = float(min(np.max(cociente), np.pi / 2.0)) if len(cociente) else 0.0
    return base - lip * (r_p + r_q), lip


def separation_certificate(psi: MapaContacto, n: int, p, q, r_p: float, r_q: float,
                           grid: int, seed: int,
                           tol: float = TOLERANCIA_BISECCION) -> ReporteSeparacion:
    """
    Certificado muestreado de que ψ_n no tiene puntos trasladados:

    1. g_n < 0 en toda la rejilla fuera de B(p, r_p) (Σ_n ⊂ B(p, r_p));
    2. ψ_n lleva las raíces resueltas de Σ_n dentro de B(q, r_q); sin
       raíces resueltas la condición falla con causa 'resolucion';
    3. ninguna fibra de Hopf toca ambas bolas (margen de fibra > 0).

    Raises:
        ErrorParametro: Si algún radio no es positivo
    """
    if r_p <= 0.0 or r_q <= 0.0:
        raise ErrorParametro("Los radios del certificado deben ser positivos")
    P, Q = coordenadas(p), coordenadas(q)

    Z = muestrear_esfera(psi.n, grid, seed)
    G = cocycle_scaling(psi, n, Z)
    fuera = ambient_distance(Z, P) > r_p
    localizado = bool(np.all(G[fuera] < 0.0))
    margen_g = float(np.min(np.abs(G[fuera]))) if np.any(fuera) else float('inf')

    # solo las raíces resueltas; las no resueltas quedan en el límite de redondeo
    muestra = extract_zero_set(psi, n, grid, seed, tol, repulsor=P)
    resuelta = not muestra.vacia
    if resuelta:
        contencion = float(np.max(ambient_distance(iterate(psi, n).aplicar(muestra.puntos), Q)))
    else:
        contencion = float('inf')
    contenido = contencion <= r_q

    margen, lip = margen_fibra(P, Q, r_p, r_q, seed=seed)

    fallida = None
    if not localizado:
        fallida = 'localizacion'
    elif not resuelta:
        fallida = 'resolucion'
    elif not contenido:
        fallida = 'contencion'
    elif margen <= 0.0:
        fallida = 'margen_fibra'

    reporte = ReporteSeparacion(fallida is None, fallida, margen_g, contencion, margen, lip,
                                n, r_p, r_q)
    logger.info("Certificado n=%d: %s", n, reporte.to_dict())
    return reporte
