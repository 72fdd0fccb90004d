"""
Comprobaciones auxiliares: el caso de la circunferencia y el de los
Hamiltonianos invariantes por el flujo de Reeb.

En S¹ con α = dθ todo difeomorfismo que preserva la orientación es de
contacto con g = ln φ′, y como ∫φ′ = 2π la función g tiene al menos dos
ceros. Para H(z) = Σ aᵢ|zᵢ|² el flujo es el unitario diagonal e^{i aᵢ t} y
los puntos críticos de H son puntos trasladados para todo t.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from contacto import MapaUnitario
from errores import ErrorParametro
from esfera import muestrear_esfera
from puntos_trasladados import defecto_lote

logger = logging.getLogger(__name__)

MUESTRAS_POSITIVIDAD = 10_000
TOLERANCIA_CERO = 1e-12


class MapaCirculo:
    """
    Difeomorfismo de S¹ dado por su levantamiento (CircleMap):

        θ ↦ θ + c + Σ_k (ε_k sin kθ + η_k cos kθ)

    Atributos:
        epsilon (np.ndarray): Coeficientes de los senos, k = 1..K
        eta (np.ndarray): Coeficientes de los cosenos, k = 1..K
        desplazamiento (float): Rotación constante c
    """

    def __init__(self, epsilon: Sequence[float] = (), eta: Sequence[float] = (),
                 desplazamiento: float = 0.0):
        eps = np.asarray(epsilon, dtype=float)
        et = np.asarray(eta, dtype=float)
        grado = max(len(eps), len(et))
        self.epsilon = np.pad(eps, (0, grado - len(eps)))
        self.eta = np.pad(et, (0, grado - len(et)))
        self.desplazamiento = float(desplazamiento)
        self.k = np.arange(1, grado + 1)

        theta = np.linspace(0.0, 2.0 * np.pi, MUESTRAS_POSITIVIDAD, endpoint=False)
        if np.min(self.derivada(theta)) <= 0.0:
            raise ErrorParametro("φ′ ≤ 0: el levantamiento no es un difeomorfismo creciente")

    @property
    def es_rotacion(self) -> bool:
        return not (np.any(self.epsilon) or np.any(self.eta))

    def levantamiento(self, theta):
        theta = np.asarray(theta, dtype=float)
        kt = np.multiply.outer(theta, self.k)
        return theta + self.desplazamiento + np.sin(kt) @ self.epsilon + np.cos(kt) @ self.eta

    def derivada(self, theta):
        theta = np.asarray(theta, dtype=float)
        kt = np.multiply.outer(theta, self.k)
        return 1.0 + np.cos(kt) @ (self.k * self.epsilon) - np.sin(kt) @ (self.k * self.eta)

    def factor_escala(self, theta):
        """g(θ) = ln φ′(θ)."""
        return np.log(self.derivada(theta))

    def to_dict(self) -> dict:
        return {
            'epsilon': self.epsilon.tolist(),
            'eta': self.eta.tolist(),
            'desplazamiento': self.desplazamiento,
        }

    def __repr__(self):
        return f"MapaCirculo(grado={len(self.k)}, desplazamiento={self.desplazamiento})"


CircleMap = MapaCirculo


@dataclass
class ResultadoCirculo:
    """Ceros de g = ln φ′ en [0, 2π)."""
    cantidad: int
    ceros: List[float] = field(default_factory=list)
    degenerado: bool = False

    def to_dict(self) -> dict:
        return {'cantidad': self.cantidad, 'ceros': self.ceros, 'degenerado': self.degenerado}


def mapa_circulo_aleatorio(rng: np.random.Generator, grado: int = 3,
                           cota: float = 0.9) -> MapaCirculo:
    """
    Mapa aleatorio con Σ k(|ε_k| + |η_k|) en (0.1·cota, cota], lo que garantiza φ′ > 0.
    """
    eps = rng.uniform(-1.0, 1.0, grado)
    eta = rng.uniform(-1.0, 1.0, grado)
    k = np.arange(1, grado + 1)
    norma = float(np.sum(k * (np.abs(eps) + np.abs(eta))))
    escala = cota * rng.uniform(0.1, 1.0) / norma
    return MapaCirculo(eps * escala, eta * escala, rng.uniform(0.0, 2.0 * np.pi))


def circle_zero_count(phi: MapaCirculo, resolution: int) -> ResultadoCirculo:
    """
    Cuenta y localiza los ceros de g = ln φ′ en [0, 2π).

    Los cambios de signo entre nodos consecutivos (periódicamente) se refinan
    con brentq a 1e−12; un nodo con g exactamente nulo cuenta como cero.

    Raises:
        ErrorParametro: Si resolution < 16 o φ′ ≤ 0 en algún nodo
    """
    if resolution < 16:
        raise ErrorParametro("La resolución debe ser ≥ 16")
    if phi.es_rotacion:
        logger.info("Rotación: g ≡ 0, todos los puntos son trasladados")
        return ResultadoCirculo(0, [], True)

    theta = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    if np.min(phi.derivada(theta)) <= 0.0:
        raise ErrorParametro("φ′ ≤ 0: difeomorfismo inválido")
    g = phi.factor_escala(theta)

    ceros = [float(t) for t in theta[g == 0.0]]
    for j in range(resolution):
        siguiente = (j + 1) % resolution
        if g[j] * g[siguiente] < 0.0:
            fin = theta[siguiente] if siguiente else 2.0 * np.pi
            raiz = brentq(phi.factor_escala, theta[j], fin, xtol=TOLERANCIA_CERO)
            ceros.append(float(raiz % (2.0 * np.pi)))

    ceros.sort()
    if len(ceros) < 2:
        logger.warning("Solo %d ceros con resolución %d", len(ceros), resolution)
    return ResultadoCirculo(len(ceros), ceros, False)


def integral_circulo(phi: MapaCirculo, resolucion: int = 4096) -> float:
    """∫₀^{2π} e^{g(θ)} dθ por la regla del trapecio (debe valer 2π)."""
    theta = np.linspace(0.0, 2.0 * np.pi, resolucion + 1)
    return float(trapezoid(np.exp(phi.factor_escala(theta)), theta))


class HamiltonianoInvariante:
    """
    H(z) = Σ aᵢ|zᵢ|², constante sobre las órbitas de Reeb (InvariantHamiltonian).

    Atributos:
        pesos (np.ndarray): Pesos (a₁, …, a_n)
    """

    def __init__(self, pesos: Sequence[float]):
        pesos = np.asarray(pesos, dtype=float)
        if pesos.ndim != 1 or len(pesos) < 1:
            raise ErrorParametro("Los pesos deben formar un vector no vacío")
        self.pesos = pesos
        self.n = len(pesos)

    def __call__(self, Z):
        Z = np.asarray(Z, dtype=complex)
        return np.abs(Z) ** 2 @ self.pesos

    def estratos(self) -> Dict[float, List[int]]:
        """Coordenadas agrupadas por valor del peso."""
        grupos: Dict[float, List[int]] = {}
        for i, a in enumerate(self.pesos):
            grupos.setdefault(float(a), []).append(i)
        return grupos

    def to_dict(self) -> dict:
        return {'pesos': self.pesos.tolist()}


InvariantHamiltonian = HamiltonianoInvariante


def invariant_flow(H: HamiltonianoInvariante, t: float) -> MapaUnitario:
    """Flujo de contacto de H en tiempo t: zᵢ ↦ e^{i aᵢ t} zᵢ."""
    return MapaUnitario(np.diag(np.exp(1j * H.pesos * t)),
                        {'tipo': 'flujo_hamiltoniano', 'pesos': H.pesos.tolist(), 't': float(t)})


def puntos_criticos(H: HamiltonianoInvariante, muestras: int, seed: int) -> Dict[float, np.ndarray]:
    """
    Muestras de cada estrato crítico: esferas soportadas en las coordenadas
    que comparten un mismo peso.
    """
    rng = np.random.default_rng(seed)
    resultado = {}
    for valor, indices in H.estratos().items():
        Z = np.zeros((muestras, H.n), dtype=complex)
        Z[:, indices] = muestrear_esfera(len(indices), muestras, rng)
        resultado[valor] = Z
    return resultado


@dataclass
class ReporteCriticos:
    """Defecto máximo del flujo sobre los puntos críticos muestreados."""
    cumple: bool
    max_defecto: float
    por_estrato: Dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'cumple': self.cumple,
            'max_defecto': self.max_defecto,
            'por_estrato': {str(k): v for k, v in self.por_estrato.items()},
        }


def critical_points_are_translated(H: HamiltonianoInvariante, t_list: Sequence[float],
                                   tol: float = 1e-10, muestras: int = 64,
                                   seed: int = 0) -> ReporteCriticos:
    """Comprueba defect(φ_t, z) ≤ tol para puntos críticos z de H y cada t."""
    por_estrato = {}
    for valor, Z in puntos_criticos(H, muestras, seed).items():
        maximo = 0.0
        for t in t_list:
            total = defecto_lote(invariant_flow(H, t), Z)[2]
            maximo = max(maximo, float(np.max(total)))
        por_estrato[valor] = maximo

    max_defecto = max(por_estrato.values())
    return ReporteCriticos(max_defecto <= tol, max_defecto, por_estrato)
