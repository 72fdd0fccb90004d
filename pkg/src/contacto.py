"""
Módulo que define la abstracción de contactomorfismo de S^{2n-1}.
Incluye una clase base abstracta, las implementaciones elementales (identidad,
unitarios, composición, iteración, conjugación) y las operaciones sobre el
factor de escala: verificación de la condición de contacto, cociclo y
distorsión de volumen.

Convención: φ*α = e^g α, y g se calcula normalizando con el campo de Reeb,
g(z) = ln α_{φ(z)}(dφ_z R_z), porque α(R) = 1.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np

from errores import ErrorContrato
from esfera import (
    PuntoEsfera,
    VectorTangente,
    a_complejo,
    a_real,
    contact_form,
    coordenadas,
    marco_tangente,
    normalizar,
    retraer,
)

logger = logging.getLogger(__name__)

PASO_DIFERENCIAS = 1e-6


def realificar(A) -> np.ndarray:
    """
    Matriz real (2n × 2n) de la aplicación ℂ-lineal A en coordenadas (x, y).

    Acepta lotes de matrices de forma (..., n, n).
    """
    A = np.asarray(A, dtype=complex)
    fila_superior = np.concatenate([A.real, -A.imag], axis=-1)
    fila_inferior = np.concatenate([A.imag, A.real], axis=-1)
    return np.concatenate([fila_superior, fila_inferior], axis=-2)


def aplicar_jacobiano(J, V) -> np.ndarray:
    """Aplica la matriz real J (..., 2n, 2n) al vector complejo V (..., n)."""
    return a_complejo(np.einsum('...ij,...j->...i', J, a_real(V)))


class MapaContacto(ABC):
    """
    Clase abstracta que define la interfaz de un contactomorfismo (ContactMap).

    Atributos:
        n (int): Dimensión compleja del espacio ambiente
        procedencia (dict): Descripción estructurada del origen del mapa
    """

    def __init__(self, n: int, procedencia: dict):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError("La dimensión debe ser un entero positivo")
        self.n = int(n)
        self.procedencia = procedencia

    @abstractmethod
    def aplicar(self, Z) -> np.ndarray:
        """
        Evalúa el mapa en un punto o en un lote de puntos.

        Args:
            Z: Arreglo complejo (..., n) sobre la esfera

        Returns:
            np.ndarray: Imágenes, renormalizadas a la esfera
        """

    @abstractmethod
    def jacobiano(self, Z) -> np.ndarray:
        """
        Derivada real en coordenadas (x, y), forma (..., 2n, 2n).

        Solo su restricción a T_z S tiene significado intrínseco.
        """

    @abstractmethod
    def inversa(self) -> 'MapaContacto':
        """Devuelve el mapa inverso."""

    def factor_escala(self, Z) -> np.ndarray:
        """
        Factor de escala g(z) por normalización de Reeb.

        Raises:
            ErrorContrato: Si α_{φ(z)}(dφ R) ≤ 0 (el mapa no preserva la orientación)
        """
        return factor_escala_directo(self, Z)

    def __call__(self, z):
        imagen = self.aplicar(coordenadas(z))
        return PuntoEsfera(imagen) if isinstance(z, PuntoEsfera) else imagen

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, procedencia={self.procedencia['tipo']!r})"


ContactMap = MapaContacto


# ----------------------------------------------------------------------------
# Implementaciones elementales

class Identidad(MapaContacto):
    """El mapa identidad de S^{2n-1}."""

    def __init__(self, n: int):
        super().__init__(n, {'tipo': 'unitario', 'matriz': 'identidad'})

    def aplicar(self, Z):
        return normalizar(coordenadas(Z))

    def jacobiano(self, Z):
        Z = coordenadas(Z)
        return np.broadcast_to(np.eye(2 * self.n), Z.shape[:-1] + (2 * self.n, 2 * self.n))

    def inversa(self):
        return self

    def factor_escala(self, Z):
        return np.zeros(coordenadas(Z).shape[:-1])


class MapaUnitario(MapaContacto):
    """
    Restricción a la esfera de un unitario U de ℂⁿ. Preserva α exactamente.

    Atributos:
        matriz (np.ndarray): Matriz unitaria n × n
    """

    def __init__(self, matriz, procedencia: Optional[dict] = None):
        U = np.array(matriz, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("La matriz unitaria debe ser cuadrada")
        if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > 1e-10:
            raise ValueError("La matriz no es unitaria")

        super().__init__(U.shape[0], procedencia or {'tipo': 'unitario'})
        U.setflags(write=False)
        self.matriz = U
        self._real = realificar(U)

    def aplicar(self, Z):
        return normalizar(coordenadas(Z) @ self.matriz.T)

    def jacobiano(self, Z):
        Z = coordenadas(Z)
        return np.broadcast_to(self._real, Z.shape[:-1] + self._real.shape)

    def inversa(self):
        return MapaUnitario(self.matriz.conj().T,
                            {'tipo': 'inversa', 'de': self.procedencia})


class ConjugacionCompleja(MapaContacto):
    """
    z ↦ conj(z). Preserva el hiperplano de contacto pero invierte α (conj*α = −α);
    no es un contactomorfismo en el sentido orientado. Sirve de control negativo.
    """

    def __init__(self, n: int):
        super().__init__(n, {'tipo': 'conjugacion_compleja'})

    def aplicar(self, Z):
        return normalizar(np.conj(coordenadas(Z)))

    def jacobiano(self, Z):
        Z = coordenadas(Z)
        D = np.diag(np.concatenate([np.ones(self.n), -np.ones(self.n)]))
        return np.broadcast_to(D, Z.shape[:-1] + D.shape)

    def inversa(self):
        return self


class Composicion(MapaContacto):
    """φ∘ψ. Evaluación y jacobiano por la regla de la cadena."""

    def __init__(self, phi: MapaContacto, psi: MapaContacto):
        if phi.n != psi.n:
            raise ErrorContrato(f"Dimensiones incompatibles: {phi.n} y {psi.n}")
        super().__init__(phi.n, {'tipo': 'composicion',
                                 'izquierda': phi.procedencia,
                                 'derecha': psi.procedencia})
        self.phi = phi
        self.psi = psi

    def aplicar(self, Z):
        return self.phi.aplicar(self.psi.aplicar(Z))

    def jacobiano(self, Z):
        Z = coordenadas(Z)
        return self.phi.jacobiano(self.psi.aplicar(Z)) @ self.psi.jacobiano(Z)

    def inversa(self):
        return Composicion(self.psi.inversa(), self.phi.inversa())


class Iteracion(MapaContacto):
    """
    Iterado φ_k = φ∘⋯∘φ (k veces).

    La órbita se evalúa punto a punto; el factor de escala usa la suma del
    cociclo g_k = g + g∘φ + ⋯ + g∘φ_{k−1}, que evita productos largos de
    jacobianos.
    """

    def __init__(self, phi: MapaContacto, k: int):
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError("El número de iteraciones debe ser un entero ≥ 1")
        super().__init__(phi.n, {'tipo': 'iteracion', 'k': int(k), 'base': phi.procedencia})
        self.phi = phi
        self.k = int(k)

    def aplicar(self, Z):
        W = coordenadas(Z)
        for _ in range(self.k):
            W = self.phi.aplicar(W)
        return W

    def jacobiano(self, Z):
        W = coordenadas(Z)
        J = self.phi.jacobiano(W)
        for _ in range(self.k - 1):
            W = self.phi.aplicar(W)
            J = self.phi.jacobiano(W) @ J
        return J

    def inversa(self):
        return Iteracion(self.phi.inversa(), self.k)

    def factor_escala(self, Z):
        return cocycle_scaling(self.phi, self.k, Z)


class Conjugado(MapaContacto):
    """σ∘φ∘σ⁻¹."""

    def __init__(self, phi: MapaContacto, sigma: MapaContacto):
        if phi.n != sigma.n:
            raise ErrorContrato(f"Dimensiones incompatibles: {phi.n} y {sigma.n}")
        super().__init__(phi.n, {'tipo': 'conjugado',
                                 'mapa': phi.procedencia,
                                 'conjugador': sigma.procedencia})
        self.phi = phi
        self.sigma = sigma
        self.sigma_inv = sigma.inversa()

    def aplicar(self, Z):
        return self.sigma.aplicar(self.phi.aplicar(self.sigma_inv.aplicar(Z)))

    def jacobiano(self, Z):
        Z = coordenadas(Z)
        U = self.sigma_inv.aplicar(Z)
        V = self.phi.aplicar(U)
        return self.sigma.jacobiano(V) @ self.phi.jacobiano(U) @ self.sigma_inv.jacobiano(Z)

    def inversa(self):
        return Conjugado(self.phi.inversa(), self.sigma)


# ----------------------------------------------------------------------------
# Operaciones

def factor_conforme(phi: MapaContacto, Z) -> np.ndarray:
    """λ(z) = α_{φ(z)}(dφ_z R_z), sin logaritmo (negativo si φ invierte α)."""
    Z = coordenadas(Z)
    imagen = phi.aplicar(Z)
    empujado = aplicar_jacobiano(phi.jacobiano(Z), 1j * Z)
    return contact_form(imagen, empujado)


def factor_escala_directo(phi: MapaContacto, Z) -> np.ndarray:
    """g(z) = ln α_{φ(z)}(dφ_z R_z) usando siempre el jacobiano completo."""
    lam = factor_conforme(phi, Z)
    if np.any(lam <= 0.0):
        raise ErrorContrato("α(dφ R) ≤ 0: el mapa no es un contactomorfismo que preserve la orientación")
    return np.log(lam)


def scaling_factor(phi: MapaContacto, z):
    """
    Factor de escala g(z) de φ (φ*α = e^g α).

    Para iterados usa la suma del cociclo; para el resto, la normalización de Reeb.
    """
    return phi.factor_escala(coordenadas(z))


def residuo_contacto(phi: MapaContacto, Z) -> np.ndarray:
    """
    Residuo de la condición de contacto con la base ortonormal de T_z S.

    Vectorizado sobre lotes; ver verify_contact.
    """
    Z = coordenadas(Z)
    marco = marco_tangente(Z)
    base = a_complejo(np.swapaxes(marco, -1, -2))
    return _residuo(phi, Z, base)


def _residuo(phi: MapaContacto, Z, base) -> np.ndarray:
    # base: (..., m, n) vectores tangentes en Z
    escala = np.asarray(np.abs(factor_conforme(phi, Z)))
    imagen = phi.aplicar(Z)
    J = phi.jacobiano(Z)
    empujados = aplicar_jacobiano(J[..., None, :, :], base)
    izquierda = contact_form(imagen[..., None, :], empujados)
    alfa = contact_form(Z[..., None, :], base)
    return np.max(np.abs(izquierda - escala[..., None] * alfa) / (1.0 + np.abs(alfa)), axis=-1)


def verify_contact(phi: MapaContacto, z, basis: Optional[List[VectorTangente]] = None) -> float:
    """
    Comprueba numéricamente (φ*α)_z = e^{g(z)} α_z sobre una base de T_z S.

    Args:
        phi (MapaContacto): Mapa a comprobar
        z: Punto de la esfera
        basis (List[VectorTangente]): 2n−1 vectores tangentes en z; por defecto
            una base ortonormal

    Returns:
        float: max_v |α_{φ(z)}(dφ v) − e^g α_z(v)| / (1 + |α_z(v)|)

    Raises:
        ErrorContrato: Si la base no está en z o es degenerada
    """
    Z = coordenadas(z)
    if basis is None:
        return float(residuo_contacto(phi, Z))

    for v in basis:
        if np.linalg.norm(coordenadas(v.base) - Z) > 1e-12:
            raise ErrorContrato("Un vector de la base no está basado en z")

    base = np.array([coordenadas(v) for v in basis])
    rango = np.linalg.matrix_rank(a_real(base), tol=1e-10)
    if len(basis) != 2 * phi.n - 1 or rango != 2 * phi.n - 1:
        raise ErrorContrato("La base no genera el espacio tangente (base degenerada)")

    return float(_residuo(phi, Z, base))


def compose(phi: MapaContacto, psi: MapaContacto) -> MapaContacto:
    """φ∘ψ."""
    return Composicion(phi, psi)


def inverse(phi: MapaContacto) -> MapaContacto:
    """φ⁻¹."""
    return phi.inversa()


def iterate(phi: MapaContacto, k: int) -> MapaContacto:
    """
    Iterado k-ésimo; k = 0 devuelve la identidad.

    Raises:
        ValueError: Si k < 0
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError("El número de iteraciones debe ser un entero no negativo")
    if k == 0:
        return Identidad(phi.n)
    return Iteracion(phi, k)


def cocycle_scaling(phi: MapaContacto, k: int, z):
    """
    Suma del cociclo Σ_{j<k} g(φ_j(z)) a lo largo de la órbita de z.

    Raises:
        ValueError: Si k < 1
    """
    if k < 1:
        raise ValueError("El cociclo requiere k ≥ 1")
    W = coordenadas(z)
    total = np.zeros(W.shape[:-1])
    for _ in range(k):
        total = total + phi.factor_escala(W)
        W = phi.aplicar(W)
    return total


def conjugate(phi: MapaContacto, sigma: MapaContacto) -> MapaContacto:
    """σ∘φ∘σ⁻¹."""
    return Conjugado(phi, sigma)


def volume_distortion(phi: MapaContacto, z):
    """
    Determinante de dφ_z entre espacios tangentes con marcos ortonormales,
    calculado como determinante de Gram √det(AᵀA) con A = J·E_z.
    """
    Z = coordenadas(z)
    A = phi.jacobiano(Z) @ marco_tangente(Z)
    gram = np.swapaxes(A, -1, -2) @ A
    return np.sqrt(np.linalg.det(gram))


def jacobiano_diferencias(phi: MapaContacto, z, paso: float = PASO_DIFERENCIAS) -> np.ndarray:
    """
    Derivada tangente por diferencias centrales sobre la base ortonormal de T_z S.

    Returns:
        np.ndarray: (..., 2n, 2n−1), columnas dφ(e_k) en coordenadas reales
    """
    Z = coordenadas(z)
    marco = marco_tangente(Z)
    columnas = []
    for k in range(marco.shape[-1]):
        V = a_complejo(marco[..., :, k])
        adelante = phi.aplicar(retraer(Z, paso * V))
        atras = phi.aplicar(retraer(Z, -paso * V))
        columnas.append(a_real(adelante - atras) / (2.0 * paso))
    return np.stack(columnas, axis=-1)


def error_jacobiano(phi: MapaContacto, z, paso: float = PASO_DIFERENCIAS) -> np.ndarray:
    """Error relativo (Frobenius) entre el jacobiano analítico y el de diferencias."""
    Z = coordenadas(z)
    analitico = phi.jacobiano(Z) @ marco_tangente(Z)
    numerico = jacobiano_diferencias(phi, Z, paso)
    diferencia = np.linalg.norm(analitico - numerico, axis=(-2, -1))
    return diferencia / np.linalg.norm(analitico, axis=(-2, -1))
