"""
Módulo con la geometría de la esfera de contacto estándar S^{2n-1} ⊂ ℂⁿ.
Incluye puntos, vectores tangentes, la forma de contacto, el campo de Reeb,
la distancia entre fibras de Hopf y el muestreo determinista.

Todas las funciones aceptan un único punto (vector complejo de longitud n) o un
lote de puntos (arreglo de forma (..., n)); las coordenadas complejas van
siempre en el último eje.
"""

import logging
from typing import List

import numpy as np
from scipy.spatial import cKDTree

from errores import ErrorContrato

logger = logging.getLogger(__name__)

TOLERANCIA_NORMA = 1e-12
TOLERANCIA_TANGENCIA = 1e-10


class PuntoEsfera:
    """
    Punto de la esfera unidad S^{2n-1} ⊂ ℂⁿ (SpherePoint).

    Las coordenadas se renormalizan al construir el punto, de modo que una
    cadena larga de iteraciones no se sale de la esfera.

    Atributos:
        coords (np.ndarray): Vector complejo de norma 1 (solo lectura)
        n (int): Dimensión compleja del espacio ambiente
    """

    def __init__(self, coords):
        """
        Inicializa el punto renormalizando las coordenadas.

        Args:
            coords: Secuencia de números complejos (longitud n ≥ 1)

        Raises:
            ValueError: Si el vector está vacío, no es unidimensional o es nulo
        """
        z = np.array(coords, dtype=complex)
        if z.ndim != 1 or z.size == 0:
            raise ValueError("Las coordenadas deben ser un vector complejo no vacío")

        norma = np.linalg.norm(z)
        if not np.isfinite(norma) or norma == 0.0:
            raise ValueError("No se puede normalizar un vector nulo o no finito")

        z = z / norma
        z.setflags(write=False)
        self._coords = z

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def n(self) -> int:
        return self._coords.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._coords.copy()
        return self._coords.astype(dtype)

    def __repr__(self):
        """Representación en string del punto para debugging."""
        return f"PuntoEsfera(coords={np.array2string(self._coords, precision=6)})"

    def __str__(self):
        """Representación legible del punto."""
        partes = ", ".join(f"{c.real:.6f}{c.imag:+.6f}i" for c in self._coords)
        return f"({partes})"

    def to_dict(self) -> dict:
        """
        Convierte el punto a un diccionario para serialización.

        Returns:
            dict: Coordenadas intercaladas parte real / parte imaginaria
        """
        return {'coords': intercalar(self._coords)}

    @classmethod
    def from_dict(cls, data: dict):
        """Crea un punto a partir de coordenadas intercaladas re/im."""
        valores = np.asarray(data['coords'], dtype=float)
        return cls(valores[0::2] + 1j * valores[1::2])


class VectorTangente:
    """
    Vector tangente a la esfera en un punto base (TangentVector).

    Atributos:
        base (PuntoEsfera): Punto de tangencia
        vec (np.ndarray): Vector complejo con Re⟨vec, base⟩ = 0
    """

    def __init__(self, base: PuntoEsfera, vec):
        """
        Raises:
            ValueError: Si el vector no es tangente o la dimensión no coincide
        """
        if not isinstance(base, PuntoEsfera):
            raise ValueError("La base debe ser una instancia de PuntoEsfera")

        v = np.array(vec, dtype=complex)
        if v.shape != base.coords.shape:
            raise ValueError("La dimensión del vector no coincide con la del punto base")

        residuo = abs(np.real(producto_hermitiano(v, base.coords)))
        if residuo > TOLERANCIA_TANGENCIA:
            raise ValueError(f"El vector no es tangente a la esfera (residuo {residuo:.3e})")

        v.setflags(write=False)
        self.base = base
        self.vec = v

    @classmethod
    def proyectar(cls, base: PuntoEsfera, vec):
        """Crea un vector tangente proyectando `vec` sobre T_z S."""
        v = np.asarray(vec, dtype=complex)
        z = base.coords
        return cls(base, v - np.real(producto_hermitiano(v, z)) * z)

    def __repr__(self):
        return f"VectorTangente(base={self.base!r}, vec={np.array2string(self.vec, precision=6)})"


SpherePoint = PuntoEsfera
TangentVector = VectorTangente


# ----------------------------------------------------------------------------
# Conversiones

def coordenadas(z) -> np.ndarray:
    """Devuelve las coordenadas complejas de un punto, de un vector tangente o de un lote."""
    if isinstance(z, PuntoEsfera):
        return z.coords
    if isinstance(z, VectorTangente):
        return z.vec
    return np.asarray(z, dtype=complex)


def a_real(Z) -> np.ndarray:
    """ℂⁿ → ℝ^{2n} con el orden (x₁..x_n, y₁..y_n)."""
    Z = coordenadas(Z)
    return np.concatenate([Z.real, Z.imag], axis=-1)


def a_complejo(X) -> np.ndarray:
    """ℝ^{2n} → ℂⁿ, inversa de a_real."""
    X = np.asarray(X, dtype=float)
    n = X.shape[-1] // 2
    return X[..., :n] + 1j * X[..., n:]


def intercalar(Z) -> list:
    """Coordenadas intercaladas (re₁, im₁, re₂, im₂, ...) como lista de floats."""
    Z = coordenadas(Z)
    return [float(v) for c in Z for v in (c.real, c.imag)]


def normalizar(Z) -> np.ndarray:
    """Proyecta radialmente sobre la esfera unidad."""
    Z = coordenadas(Z)
    return Z / np.linalg.norm(Z, axis=-1, keepdims=True)


def producto_hermitiano(u, v) -> np.ndarray:
    """⟨u, v⟩ = Σ uᵢ v̄ᵢ sobre el último eje."""
    return np.sum(coordenadas(u) * np.conj(coordenadas(v)), axis=-1)


# ----------------------------------------------------------------------------
# Operaciones

def _comprobar_base(z, v):
    if isinstance(v, VectorTangente):
        distancia = np.linalg.norm(v.base.coords - coordenadas(z))
        if distancia > TOLERANCIA_NORMA:
            raise ErrorContrato("El vector tangente no está basado en el punto dado")


def contact_form(z, v):
    """
    Evalúa la forma de contacto α_z(v) = Im⟨v, z⟩.

    Coincide con la fórmula real Σ (xᵢ dyᵢ − yᵢ dxᵢ) (ver contact_form_real).

    Raises:
        ErrorContrato: Si v es un VectorTangente con otro punto base
    """
    _comprobar_base(z, v)
    return np.imag(producto_hermitiano(v, z))


def contact_form_real(z, v):
    """Forma de contacto con la fórmula en coordenadas reales Σ (xᵢ vʸᵢ − yᵢ vˣᵢ)."""
    _comprobar_base(z, v)
    Z, V = coordenadas(z), coordenadas(v)
    return np.sum(Z.real * V.imag - Z.imag * V.real, axis=-1)


def reeb_vector(z):
    """
    Campo de Reeb R_z = i·z.

    Returns:
        VectorTangente si z es un PuntoEsfera; arreglo complejo en otro caso
    """
    if isinstance(z, PuntoEsfera):
        return VectorTangente(z, 1j * z.coords)
    return 1j * coordenadas(z)


def fase_optima(z, w) -> np.ndarray:
    """Fase unitaria u que minimiza ‖u·z − w‖ (u = ⟨w, z⟩/|⟨w, z⟩|, o 1 si es nulo)."""
    s = producto_hermitiano(w, z)
    modulo = np.abs(s)
    return np.where(modulo > 0.0, s / np.where(modulo > 0.0, modulo, 1.0), 1.0)


def fiber_distance(z, w):
    """
    Distancia de Fubini–Study entre las fibras de Hopf de z y w, en [0, π/2].

    Vale arccos(clamp(|⟨z, w⟩|, 0, 1)); se evalúa como 2·arcsin(‖u·z − w‖/2)
    con la fase óptima u, que es la misma cantidad pero precisa cerca de 0.
    """
    Z, W = coordenadas(z), coordenadas(w)
    u = fase_optima(Z, W)
    cuerda = np.linalg.norm(u[..., None] * Z - W, axis=-1)
    return 2.0 * np.arcsin(np.clip(cuerda / 2.0, 0.0, np.sqrt(0.5)))


def ambient_distance(z, w):
    """Distancia cordal ‖z − w‖ en ℝ^{2n}, en [0, 2]."""
    return np.linalg.norm(coordenadas(z) - coordenadas(w), axis=-1)


def muestrear_esfera(n: int, count: int, semilla) -> np.ndarray:
    """
    Muestra uniforme en S^{2n-1} por normalización de gaussianas.

    Args:
        n (int): Dimensión compleja
        count (int): Número de puntos
        semilla: Entero o np.random.Generator

    Returns:
        np.ndarray: Arreglo complejo de forma (count, n)
    """
    if count <= 0:
        return np.empty((0, n), dtype=complex)
    rng = semilla if isinstance(semilla, np.random.Generator) else np.random.default_rng(semilla)
    X = rng.standard_normal((count, 2 * n))
    return normalizar(a_complejo(X))


def sample_sphere(n: int, count: int, seed: int) -> List[PuntoEsfera]:
    """Versión de muestrear_esfera que devuelve una lista de PuntoEsfera."""
    return [PuntoEsfera(z) for z in muestrear_esfera(n, count, seed)]


# ----------------------------------------------------------------------------
# Herramientas sobre el espacio tangente

def marco_tangente(z) -> np.ndarray:
    """
    Base ortonormal real de T_z S = z^⊥ ⊂ ℝ^{2n}.

    Se obtiene con una reflexión de Householder que lleva e₁ a ±z; las
    columnas restantes de la reflexión son ortogonales a z.

    Returns:
        np.ndarray: Arreglo real de forma (..., 2n, 2n−1)
    """
    X = a_real(z)
    m = X.shape[-1]
    signo = np.where(X[..., 0] >= 0.0, 1.0, -1.0)
    v = X.copy()
    v[..., 0] += signo
    vv = np.sum(v * v, axis=-1)[..., None, None]
    H = np.eye(m) - 2.0 * v[..., :, None] * v[..., None, :] / vv
    return H[..., :, 1:]


def retraer(z, V) -> np.ndarray:
    """Retracción sobre la esfera: normaliza z + V (V complejo, tangente)."""
    return normalizar(coordenadas(z) + coordenadas(V))


def muestrear_bola(centro, radio: float, count: int, semilla) -> np.ndarray:
    """
    Puntos de la bola cordal B(centro, radio) ∩ S^{2n-1}.

    La dirección es una gaussiana tangente y el ángulo geodésico se elige con
    densidad proporcional al volumen de la bola de dimensión 2n−1.
    """
    c = coordenadas(centro)
    rng = semilla if isinstance(semilla, np.random.Generator) else np.random.default_rng(semilla)
    dim = 2 * c.size - 1
    if count <= 0:
        return np.empty((0, c.size), dtype=complex)
    if radio <= 0.0:
        return np.repeat(c[None, :], count, axis=0)

    angulo_max = 2.0 * np.arcsin(min(radio, 2.0) / 2.0)
    coef = rng.standard_normal((count, dim))
    direcciones = coef @ marco_tangente(c).T
    direcciones /= np.linalg.norm(direcciones, axis=-1, keepdims=True)
    angulos = angulo_max * rng.random(count) ** (1.0 / dim)
    V = a_complejo(direcciones)
    return normalizar(np.cos(angulos)[:, None] * c[None, :] + np.sin(angulos)[:, None] * V)


def espaciado_vecinos(Z) -> float:
    """Mediana de la distancia al vecino más cercano de una nube de puntos."""
    X = a_real(Z)
    if len(X) < 2:
        return float('nan')
    distancias, _ = cKDTree(X).query(X, k=2)
    return float(np.median(distancias[:, 1]))
