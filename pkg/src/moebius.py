"""
Módulo de transformaciones de Möbius de la esfera S^{2n-1}.

Un elemento de U(n,1) preserva la forma cuadrática q = −|u₀|² + Σ|uᵢ|² y,
proyectivizando con zᵢ = uᵢ/u₀, actúa sobre la esfera por contactomorfismos.
Aquí se construye la familia canónica φ_a (con puntos fijos P = −e_eje y
Q = +e_eje), su jacobiano analítico, el espectro en los puntos fijos, el
conjugador σ y el camino de isotopía hacia la identidad.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from contacto import MapaContacto, realificar
from errores import ErrorConsistencia, ErrorContrato, ErrorParametro
from esfera import (
    PuntoEsfera,
    ambient_distance,
    coordenadas,
    fiber_distance,
    normalizar,
    producto_hermitiano,
)

logger = logging.getLogger(__name__)

TOLERANCIA_ETA = 1e-12
TOLERANCIA_ESPECTRO = 1e-8
MARGEN_FIBRA = 0.5
EPSILON_ISOTOPIA = 1e-6


def eta(n: int) -> np.ndarray:
    """Matriz de la forma cuadrática q: diag(−1, 1, …, 1) de tamaño n+1."""
    return np.diag(np.concatenate([[-1.0], np.ones(n)])).astype(complex)


class MatrizSignatura:
    """
    Elemento de U(n,1): matriz compleja (n+1) × (n+1) con M* η M = η (SignatureMatrix).

    Atributos:
        entradas (np.ndarray): Matriz compleja de solo lectura
        n (int): Dimensión compleja de la esfera sobre la que actúa
    """

    def __init__(self, entradas, tolerancia: float = TOLERANCIA_ETA):
        M = np.array(entradas, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
            raise ErrorParametro("La matriz de signatura debe ser cuadrada de tamaño ≥ 2")

        self.n = M.shape[0] - 1
        # la tolerancia escala con el tamaño de las entradas (‖M‖² ~ 1/a²)
        escala = max(1.0, float(np.max(np.abs(M))) ** 2)
        residuo = self._residuo(M)
        if residuo > tolerancia * escala:
            raise ErrorParametro(f"La matriz no preserva q (‖M*ηM − η‖ = {residuo:.3e})")

        M.setflags(write=False)
        self.entradas = M

    def _residuo(self, M) -> float:
        E = eta(M.shape[0] - 1)
        return float(np.max(np.abs(M.conj().T @ E @ M - E)))

    def residuo_eta(self) -> float:
        """max |M* η M − η|."""
        return self._residuo(self.entradas)

    def inversa(self) -> 'MatrizSignatura':
        """M⁻¹ = η M* η."""
        E = eta(self.n)
        return MatrizSignatura(E @ self.entradas.conj().T @ E)

    def __matmul__(self, otra: 'MatrizSignatura') -> 'MatrizSignatura':
        if self.n != otra.n:
            raise ErrorContrato(f"Dimensiones incompatibles: {self.n} y {otra.n}")
        return MatrizSignatura(self.entradas @ otra.entradas)

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            're': self.entradas.real.tolist(),
            'im': self.entradas.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'MatrizSignatura':
        return cls(np.array(data['re']) + 1j * np.array(data['im']))

    def __repr__(self):
        return f"MatrizSignatura(n={self.n}, residuo_eta={self.residuo_eta():.1e})"


SignatureMatrix = MatrizSignatura


def _validar_parametro(a: float):
    if not (0.0 < float(a) < 1.0):
        raise ErrorParametro(f"El parámetro a = {a} debe estar en (0, 1)")


def _validar_eje(eje: int, n: int):
    if not isinstance(eje, (int, np.integer)) or not (1 <= eje <= n):
        raise ErrorParametro(f"El eje {eje} debe estar en 1..{n}")


def matriz_intercambio(n: int, eje: int) -> np.ndarray:
    """Permutación de ℂ^{n+1} que intercambia las coordenadas u₁ y u_eje."""
    orden = list(range(n + 1))
    orden[1], orden[eje] = orden[eje], orden[1]
    return np.eye(n + 1, dtype=complex)[orden]


def canonical_matrix(a: float, n: int, axis: int = 1) -> MatrizSignatura:
    """
    Matriz canónica M_a con el bloque hiperbólico sobre (u₀, u_eje).

    M_a = (1/2a) [[1+a², 1−a²], [1−a², 1+a²]] ⊕ 1; para otro eje se conjuga
    con la permutación de coordenadas.

    Raises:
        ErrorParametro: Si a ∉ (0, 1) o el eje está fuera de 1..n
    """
    _validar_parametro(a)
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ErrorParametro("La dimensión debe ser un entero positivo")
    _validar_eje(axis, n)

    a = float(a)
    M = np.eye(n + 1, dtype=complex)
    M[0, 0] = M[1, 1] = (1.0 + a * a) / (2.0 * a)
    M[0, 1] = M[1, 0] = (1.0 - a * a) / (2.0 * a)
    if axis != 1:
        S = matriz_intercambio(n, axis)
        M = S @ M @ S.T
    return MatrizSignatura(M)


def matriz_canonica_exacta(a: Fraction, n: int = 2) -> List[List[Fraction]]:
    """M_a en aritmética racional exacta (eje 1)."""
    a = Fraction(a)
    if not (0 < a < 1):
        raise ErrorParametro(f"El parámetro a = {a} debe estar en (0, 1)")
    M = [[Fraction(int(i == j)) for j in range(n + 1)] for i in range(n + 1)]
    M[0][0] = M[1][1] = (1 + a * a) / (2 * a)
    M[0][1] = M[1][0] = (1 - a * a) / (2 * a)
    return M


def residuo_eta_exacto(M: List[List[Fraction]]) -> List[List[Fraction]]:
    """Mᵀ η M − η en racionales (M real); la matriz nula indica M ∈ U(n,1)."""
    m = len(M)
    signo = [Fraction(-1)] + [Fraction(1)] * (m - 1)
    return [[sum(M[k][i] * signo[k] * M[k][j] for k in range(m)) - (signo[i] if i == j else 0)
             for j in range(m)] for i in range(m)]


def _elevar(M, Z) -> np.ndarray:
    """Aplica M al vector nulo (1, z); devuelve (..., n+1)."""
    Z = coordenadas(Z)
    uno = np.ones(Z.shape[:-1] + (1,), dtype=complex)
    return np.concatenate([uno, Z], axis=-1) @ M.T


def apply_projective(M: MatrizSignatura, z):
    """
    Acción proyectiva z ↦ (M(1, z))_{1..n} / (M(1, z))₀.

    Raises:
        ErrorContrato: Si la coordenada cero se anula (z fuera de la esfera)
    """
    entradas = M.entradas if isinstance(M, MatrizSignatura) else np.asarray(M, dtype=complex)
    U = _elevar(entradas, z)
    denominador = U[..., 0]
    if np.any(np.abs(denominador) < 1e-14):
        raise ErrorContrato("La coordenada cero se anula: el punto no está en la esfera")
    imagen = normalizar(U[..., 1:] / denominador[..., None])
    return PuntoEsfera(imagen) if isinstance(z, PuntoEsfera) else imagen


def factor_escala_matriz(M, z) -> np.ndarray:
    """
    Factor de escala en forma cerrada g(z) = −2 ln|(M(1, z))₀|.

    Acepta una MatrizSignatura o un arreglo; con M = S Mᵏ S⁻¹ da el cociclo
    g_k del conjugado sin recorrer la órbita.

    Raises:
        ErrorContrato: Si la coordenada cero se anula
    """
    entradas = M.entradas if isinstance(M, MatrizSignatura) else np.asarray(M, dtype=complex)
    ell = np.abs(_elevar(entradas, z)[..., 0])
    if np.any(ell < 1e-14):
        raise ErrorContrato("La coordenada cero se anula: el punto no está en la esfera")
    return -2.0 * np.log(ell)


def potencia_conjugada(M, S, k: int) -> np.ndarray:
    """S Mᵏ S⁻¹ con S⁻¹ = η S* η (arreglos de entradas)."""
    M = M.entradas if isinstance(M, MatrizSignatura) else np.asarray(M, dtype=complex)
    S = S.entradas if isinstance(S, MatrizSignatura) else np.asarray(S, dtype=complex)
    E = eta(S.shape[0] - 1)
    return S @ np.linalg.matrix_power(M, k) @ (E @ S.conj().T @ E)


def formula_explicita(a: float, z) -> np.ndarray:
    """
    Evaluación directa de la fórmula racional de φ_a (eje 1):

        φ(z) = ((1+a²)z₁ + (1−a²), 2a z₂, …, 2a z_n) / ((1−a²)z₁ + (1+a²))
    """
    Z = coordenadas(z)
    denominador = (1.0 - a * a) * Z[..., 0] + (1.0 + a * a)
    W = 2.0 * a * Z
    W[..., 0] = (1.0 + a * a) * Z[..., 0] + (1.0 - a * a)
    return W / denominador[..., None]


class MapaMoebius(MapaContacto):
    """
    Contactomorfismo inducido por un elemento de U(n,1) (MoebiusMap).

    Atributos:
        matriz (MatrizSignatura): Matriz que lo define
        eje (int): Coordenada que hace el papel de z₁
        parametro (float): a de la familia canónica, o None
    """

    def __init__(self, matriz: MatrizSignatura, eje: int = 1,
                 parametro: Optional[float] = None, procedencia: Optional[dict] = None):
        _validar_eje(eje, matriz.n)
        if procedencia is None:
            procedencia = ({'tipo': 'moebius', 'a': float(parametro), 'eje': int(eje)}
                           if parametro is not None else {'tipo': 'moebius', 'matriz': matriz.to_dict()})
        super().__init__(matriz.n, procedencia)
        self.matriz = matriz
        self.eje = int(eje)
        self.parametro = None if parametro is None else float(parametro)

    @property
    def P(self) -> PuntoEsfera:
        """Punto fijo repulsor −e_eje."""
        z = np.zeros(self.n, dtype=complex)
        z[self.eje - 1] = -1.0
        return PuntoEsfera(z)

    @property
    def Q(self) -> PuntoEsfera:
        """Punto fijo atractor +e_eje."""
        z = np.zeros(self.n, dtype=complex)
        z[self.eje - 1] = 1.0
        return PuntoEsfera(z)

    def _denominador(self, Z) -> Tuple[np.ndarray, np.ndarray]:
        U = _elevar(self.matriz.entradas, Z)
        ell = U[..., 0]
        # sobre la esfera |ℓ| ≥ 2a²/(2a) = a para la familia canónica
        if self.parametro is not None:
            minimo = float(np.min(np.abs(ell))) if ell.size else np.inf
            if minimo < self.parametro * (1.0 - 1e-9):
                raise ErrorConsistencia(
                    f"Denominador {minimo:.3e} por debajo de la cota {self.parametro:.3e}")
        return U, ell

    def aplicar(self, Z):
        U, ell = self._denominador(coordenadas(Z))
        if np.any(np.abs(ell) < 1e-14):
            raise ErrorContrato("La coordenada cero se anula: el punto no está en la esfera")
        return normalizar(U[..., 1:] / ell[..., None])

    def jacobiano(self, Z):
        return realificar(jacobiano_complejo(self, Z))

    def inversa(self):
        return MapaMoebius(self.matriz.inversa(), self.eje,
                           procedencia={'tipo': 'inversa', 'de': self.procedencia})


MoebiusMap = MapaMoebius


def mapa_focal(a: float, n: int = 2, eje: int = 1) -> MapaMoebius:
    """El mapa focal φ_a de la familia canónica."""
    return MapaMoebius(canonical_matrix(a, n, eje), eje, parametro=a)


def jacobiano_complejo(phi: MapaMoebius, Z) -> np.ndarray:
    """
    Derivada compleja de z ↦ L(z)/ℓ(z) por la regla del cociente:

        D = (B − φ(z) ⊗ c) / ℓ(z)

    con B el bloque M[1:, 1:] y c = M[0, 1:]. Forma (..., n, n).
    """
    Z = coordenadas(Z)
    M = phi.matriz.entradas
    U, ell = phi._denominador(Z)
    imagen = U[..., 1:] / ell[..., None]
    B = M[1:, 1:]
    c = M[0, 1:]
    return (B - imagen[..., :, None] * c) / ell[..., None, None]


def moebius_jacobian(phi: MapaMoebius, z) -> np.ndarray:
    """Jacobiano real (..., 2n, 2n) de la acción proyectiva."""
    return phi.jacobiano(coordenadas(z))


@dataclass(frozen=True)
class EspectroPuntoFijo:
    """
    Multiplicadores de dφ en un punto fijo (FixedPointSpectrum).

    Atributos:
        punto (PuntoEsfera): Punto fijo
        multiplicador_reeb (float): Autovalor sobre la recta iℝ·z
        multiplicador_contacto (float): Autovalor sobre el hiperplano ℂ^{n-1}
    """
    punto: PuntoEsfera
    multiplicador_reeb: float
    multiplicador_contacto: float

    def to_dict(self) -> dict:
        return {
            'punto': self.punto.to_dict(),
            'multiplicador_reeb': self.multiplicador_reeb,
            'multiplicador_contacto': self.multiplicador_contacto,
        }


FixedPointSpectrum = EspectroPuntoFijo


def _autovalor(D: np.ndarray, v: np.ndarray) -> float:
    # v unitario; D complejo actuando sobre v
    imagen = D @ v
    valor = float(np.real(producto_hermitiano(imagen, v)))
    if np.linalg.norm(imagen - valor * v) > TOLERANCIA_ESPECTRO * max(1.0, abs(valor)):
        raise ErrorConsistencia("La dirección no es autovector de dφ en el punto fijo")
    return valor


def _espectro(phi: MapaMoebius, z: PuntoEsfera) -> EspectroPuntoFijo:
    D = jacobiano_complejo(phi, z.coords)
    reeb = _autovalor(D, 1j * z.coords)

    contacto = []
    for j in range(phi.n):
        if j == phi.eje - 1:
            continue
        e = np.zeros(phi.n, dtype=complex)
        e[j] = 1.0
        contacto.append(_autovalor(D, e))
        contacto.append(_autovalor(D, 1j * e))

    if max(contacto) - min(contacto) > TOLERANCIA_ESPECTRO * max(1.0, abs(contacto[0])):
        raise ErrorConsistencia("dφ no es escalar sobre el hiperplano de contacto")
    c = float(np.mean(contacto))
    if abs(reeb - c * c) > TOLERANCIA_ESPECTRO * max(1.0, reeb):
        raise ErrorConsistencia(f"Multiplicador de Reeb {reeb} ≠ ({c})²")

    return EspectroPuntoFijo(z, reeb, c)


def fixed_point_spectrum(phi: MapaMoebius) -> Tuple[EspectroPuntoFijo, EspectroPuntoFijo]:
    """
    Espectros de dφ en P (coordenada del eje = −1) y Q (= +1).

    Raises:
        ErrorParametro: Si φ no es de la familia canónica o n < 2
        ErrorConsistencia: Si no se cumple multiplicador_reeb = multiplicador_contacto²
    """
    if phi.parametro is None:
        raise ErrorParametro("El espectro requiere un mapa de la familia canónica")
    if phi.n < 2:
        raise ErrorParametro("El espectro requiere n ≥ 2 (no hay hiperplano de contacto en S¹)")

    espectro_p = _espectro(phi, phi.P)
    espectro_q = _espectro(phi, phi.Q)
    logger.debug("Espectro a=%s: P=(%.6g, %.6g) Q=(%.6g, %.6g)", phi.parametro,
                 espectro_p.multiplicador_reeb, espectro_p.multiplicador_contacto,
                 espectro_q.multiplicador_reeb, espectro_q.multiplicador_contacto)
    return espectro_p, espectro_q


@dataclass(frozen=True)
class Conjugador:
    """
    Conjugador σ junto con las imágenes p = σ(P), q = σ(Q).

    Atributos:
        sigma (MapaMoebius): Mapa canónico de parámetro b sobre el eje 2
        p (PuntoEsfera): Imagen del punto repulsor
        q (PuntoEsfera): Imagen del punto atractor
        distancia_fibra (float): Distancia de Fubini–Study entre las fibras de p y q
    """
    sigma: MapaMoebius
    p: PuntoEsfera
    q: PuntoEsfera
    distancia_fibra: float

    def to_dict(self) -> dict:
        return {
            'b': self.sigma.parametro,
            'p': self.p.to_dict(),
            'q': self.q.to_dict(),
            'distancia_fibra': self.distancia_fibra,
        }


def build_conjugator(b: float, n: int = 2, margen: float = MARGEN_FIBRA) -> Conjugador:
    """
    Construye σ = φ_b sobre el eje 2 y comprueba que p y q no comparten fibra.

    Raises:
        ErrorParametro: Si n < 2, b ∉ (0, 1) o la distancia entre fibras ≤ margen
    """
    if n < 2:
        raise ErrorParametro("El conjugador requiere n ≥ 2")
    sigma = mapa_focal(b, n, eje=2)

    P = np.zeros(n, dtype=complex)
    P[0] = -1.0
    p = PuntoEsfera(sigma.aplicar(P))
    q = PuntoEsfera(sigma.aplicar(-P))
    distancia = float(fiber_distance(p, q))
    if distancia <= margen:
        raise ErrorParametro(
            f"p y q demasiado cerca de la misma fibra ({distancia:.4f} ≤ {margen}); pruebe otro b")

    logger.info("Conjugador b=%s: distancia entre fibras %.6f", b, distancia)
    return Conjugador(sigma, p, q, distancia)


def puntos_conjugador_exactos(b: Fraction) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
    """p = (−2b, 1−b²)/(1+b²) y q = (2b, 1−b²)/(1+b²) en racionales (n = 2)."""
    b = Fraction(b)
    d = 1 + b * b
    return (-2 * b / d, (1 - b * b) / d), (2 * b / d, (1 - b * b) / d)


def isotopy_path(a_end: float, steps: int, n: int = 2, eje: int = 1,
                 epsilon: float = EPSILON_ISOTOPIA) -> List[MapaMoebius]:
    """
    Camino φ_{a(t)} con a(t) lineal de 1 − ε hasta a_end.

    Raises:
        ErrorParametro: Si a_end ∉ (0, 1) o steps < 2
    """
    _validar_parametro(a_end)
    if steps < 2:
        raise ErrorParametro("El camino requiere al menos 2 pasos")
    valores = np.linspace(1.0 - epsilon, a_end, steps)
    return [mapa_focal(float(a), n, eje) for a in valores]


def distancia_uniforme(phi: MapaContacto, psi: MapaContacto, Z) -> float:
    """sup_z ‖φ(z) − ψ(z)‖ sobre la muestra Z."""
    Z = coordenadas(Z)
    return float(np.max(ambient_distance(phi.aplicar(Z), psi.aplicar(Z))))
