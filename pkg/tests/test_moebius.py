"""
Pruebas unitarias para las transformaciones de Möbius y el conjugador.
"""

import pytest
import sys
import os
from fractions import Fraction
import numpy as np

# Agregar el directorio src al path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from contacto import (
    cocycle_scaling,
    conjugate,
    jacobiano_diferencias,
    realificar,
    residuo_contacto,
    scaling_factor,
)
from errores import ErrorContrato, ErrorParametro
from esfera import (
    PuntoEsfera,
    ambient_distance,
    fiber_distance,
    marco_tangente,
    muestrear_bola,
    muestrear_esfera,
)
from moebius import (
    MapaMoebius,
    MatrizSignatura,
    apply_projective,
    build_conjugator,
    canonical_matrix,
    distancia_uniforme,
    factor_escala_matriz,
    fixed_point_spectrum,
    formula_explicita,
    isotopy_path,
    mapa_focal,
    matriz_canonica_exacta,
    moebius_jacobian,
    potencia_conjugada,
    puntos_conjugador_exactos,
    residuo_eta_exacto,
)


def matriz_u11_aleatoria(rng):
    """Producto de un boost canónico y unitarios de bloque, elemento genérico de U(2,1)."""
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    U, _ = np.linalg.qr(A)
    K = np.eye(3, dtype=complex)
    K[1:, 1:] = U
    K[0, 0] = np.exp(1j * rng.uniform(0, 2 * np.pi))
    return K @ canonical_matrix(rng.uniform(0.2, 0.9), 2).entradas


class TestMatrizCanonica:
    """Tests para la matriz M_a y la forma η."""

    def test_matriz_un_medio(self):
        """Test: M_{1/2} = [[5/4, 3/4, 0], [3/4, 5/4, 0], [0, 0, 1]]."""
        M = canonical_matrix(0.5, 2).entradas
        assert np.allclose(M, [[1.25, 0.75, 0], [0.75, 1.25, 0], [0, 0, 1]], atol=1e-15)

    def test_matriz_exacta(self):
        """Test: La versión racional es exacta y preserva η."""
        M = matriz_canonica_exacta(Fraction(1, 2))
        assert M[0][0] == Fraction(5, 4) and M[0][1] == Fraction(3, 4)
        assert -M[0][0] ** 2 + M[1][0] ** 2 == -1
        assert all(x == 0 for fila in residuo_eta_exacto(M) for x in fila)

    @pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_preserva_eta(self, a):
        """Test: M_a* η M_a = η a 1e−12."""
        assert canonical_matrix(a, 3).residuo_eta() <= 1e-12

    @pytest.mark.parametrize("a", [0.0, 1.0, -0.5, 1.5])
    def test_parametro_invalido(self, a):
        """Test: a fuera de (0, 1) es un error de parámetro."""
        with pytest.raises(ErrorParametro):
            canonical_matrix(a, 2)

    def test_eje_invalido(self):
        """Test: El eje debe estar en 1..n."""
        with pytest.raises(ErrorParametro):
            canonical_matrix(0.5, 2, axis=3)

    def test_limite_identidad(self):
        """Test: M_a → identidad cuando a → 1."""
        M = canonical_matrix(1 - 1e-7, 2).entradas
        assert np.linalg.norm(M - np.eye(3)) <= 1e-6

    def test_matriz_no_signatura(self):
        """Test: Una matriz que no preserva q se rechaza."""
        with pytest.raises(ErrorParametro):
            MatrizSignatura(np.diag([2.0, 1.0, 1.0]))

    def test_inversa(self):
        """Test: η M* η es la inversa de M."""
        M = canonical_matrix(0.3, 2, axis=2)
        assert np.allclose(M.inversa().entradas @ M.entradas, np.eye(3), atol=1e-12)


class TestAccionProyectiva:
    """Tests para la acción proyectiva sobre la esfera."""

    def test_ejemplo_racional(self):
        """Test: M_{1/2}·(0, 1) = (3/5, 4/5)."""
        w = apply_projective(canonical_matrix(0.5, 2), PuntoEsfera([0.0, 1.0]))
        assert np.allclose(w.coords, [0.6, 0.8], atol=1e-15)

    def test_puntos_fijos(self):
        """Test: P = (−1, 0) y Q = (1, 0) son fijos."""
        M = canonical_matrix(0.5, 2)
        assert np.allclose(apply_projective(M, np.array([-1.0, 0.0])), [-1.0, 0.0])
        assert np.allclose(apply_projective(M, np.array([1.0, 0.0])), [1.0, 0.0])

    def test_identidad(self):
        """Test: La matriz identidad actúa trivialmente."""
        Z = muestrear_esfera(2, 10, 1)
        assert np.allclose(apply_projective(MatrizSignatura(np.eye(3)), Z), Z)

    def test_coincide_con_formula(self):
        """Test: La acción de M_a coincide con la fórmula racional explícita."""
        Z = muestrear_esfera(2, 1000, 2)
        for a in (0.3, 0.5, 0.9):
            diferencia = apply_projective(canonical_matrix(a, 2), Z) - formula_explicita(a, Z)
            assert np.max(np.abs(diferencia)) <= 1e-12

    def test_preserva_esfera(self):
        """Test: Las imágenes tienen norma 1."""
        W = mapa_focal(0.5).aplicar(muestrear_esfera(2, 500, 3))
        assert np.allclose(np.linalg.norm(W, axis=-1), 1.0, atol=1e-12)

    def test_homomorfismo(self):
        """Test: La acción de M₁M₂ es la composición de las acciones."""
        rng = np.random.default_rng(4)
        Z = muestrear_esfera(2, 100, rng)
        for _ in range(10):
            M1 = MatrizSignatura(matriz_u11_aleatoria(rng))
            M2 = MatrizSignatura(matriz_u11_aleatoria(rng))
            directo = apply_projective(M1 @ M2, Z)
            compuesto = apply_projective(M1, apply_projective(M2, Z))
            assert np.max(ambient_distance(directo, compuesto)) <= 1e-10

    def test_invariante_por_fase(self):
        """Test: Multiplicar M por una fase no cambia la acción."""
        M = canonical_matrix(0.4, 2)
        Z = muestrear_esfera(2, 50, 5)
        rotada = MatrizSignatura(np.exp(0.9j) * M.entradas)
        assert np.max(ambient_distance(apply_projective(M, Z), apply_projective(rotada, Z))) <= 1e-12

    def test_fuera_de_la_esfera(self):
        """Test: Un punto con coordenada cero nula tras M viola el contrato."""
        M = canonical_matrix(0.5, 2)
        # (1−a²)z₁ + (1+a²) = 0 para z₁ = −5/3
        with pytest.raises(ErrorContrato):
            apply_projective(M, np.array([-5.0 / 3.0, 0.0]))

    def test_permutacion_de_eje(self):
        """Test: φ_a sobre el eje 2 es φ_a sobre el eje 1 con coordenadas intercambiadas."""
        Z = muestrear_esfera(2, 50, 6)
        eje1 = mapa_focal(0.5, 2, eje=1).aplicar(Z[:, ::-1])[:, ::-1]
        eje2 = mapa_focal(0.5, 2, eje=2).aplicar(Z)
        assert np.allclose(eje1, eje2, atol=1e-13)


class TestMapaMoebius:
    """Tests para el contactomorfismo inducido."""

    @pytest.mark.parametrize("a", [0.3, 0.5, 0.7, 0.9])
    def test_contacto(self, a):
        """Test: φ_a pasa la verificación de contacto en 10³ puntos."""
        Z = muestrear_esfera(2, 1000, 7)
        assert np.max(residuo_contacto(mapa_focal(a), Z)) <= 1e-9

    def test_contacto_generico(self):
        """Test: Un elemento genérico de U(2,1) también es de contacto."""
        rng = np.random.default_rng(8)
        phi = MapaMoebius(MatrizSignatura(matriz_u11_aleatoria(rng)))
        assert np.max(residuo_contacto(phi, muestrear_esfera(2, 200, 9))) <= 1e-9

    def test_factor_en_puntos_fijos(self):
        """Test: g(P) = 2 ln(1/a) > 0 y g(Q) = 2 ln a < 0."""
        phi = mapa_focal(0.5)
        assert scaling_factor(phi, phi.P) == pytest.approx(2 * np.log(2.0), abs=1e-12)
        assert scaling_factor(phi, phi.Q) == pytest.approx(2 * np.log(0.5), abs=1e-12)

    def test_solo_dos_puntos_fijos(self):
        """Test: Los casi fijos de una muestra están cerca de P o de Q."""
        phi = mapa_focal(0.5)
        Z = muestrear_esfera(2, 10_000, 10)
        casi_fijos = Z[ambient_distance(phi.aplicar(Z), Z) < 1e-3]
        cerca = np.minimum(ambient_distance(casi_fijos, phi.P), ambient_distance(casi_fijos, phi.Q))
        assert np.all(cerca < 0.1)

    @pytest.mark.parametrize("radio", [0.5, 0.1, 0.01])
    def test_bolas_de_q_invariantes(self, radio):
        """Test: φ lleva B(Q, r) dentro de sí misma."""
        phi = mapa_focal(0.5)
        B = muestrear_bola(phi.Q, radio, 1000, 11)
        assert np.all(ambient_distance(phi.aplicar(B), phi.Q) <= radio)

    def test_atraccion_hacia_q(self):
        """Test: Las órbitas de puntos aleatorios llegan a B(Q, 1e−6) en 200 pasos."""
        phi = mapa_focal(0.5)
        Z = muestrear_esfera(2, 1000, 12)
        for _ in range(200):
            Z = phi.aplicar(Z)
        assert np.all(ambient_distance(Z, phi.Q) <= 1e-6)

    def test_inversa(self):
        """Test: φ⁻¹∘φ es la identidad."""
        phi = mapa_focal(0.3, 3, eje=2)
        Z = muestrear_esfera(3, 100, 13)
        assert np.max(ambient_distance(phi.inversa().aplicar(phi.aplicar(Z)), Z)) <= 1e-12

    def test_jacobiano_real(self):
        """Test: moebius_jacobian tiene forma (m, 4, 4) y coincide con diferencias sobre T_z S."""
        phi = mapa_focal(0.5)
        Z = muestrear_esfera(2, 50, 14)
        J = moebius_jacobian(phi, Z)
        assert J.shape == (50, 4, 4)
        assert np.max(np.abs(J @ marco_tangente(Z) - jacobiano_diferencias(phi, Z))) <= 1e-6

    def test_jacobiano_en_el_repulsor(self):
        """Test: En P la derivada compleja es diag(4, 2) para a = 1/2."""
        phi = mapa_focal(0.5)
        J = moebius_jacobian(phi, phi.P)
        assert np.allclose(J, realificar(np.diag([4.0, 2.0])), atol=1e-12)

    def test_factor_forma_cerrada(self):
        """Test: −2 ln|(M(1, z))₀| da ln 4 en P, −ln 4 en Q y coincide con g en general."""
        phi = mapa_focal(0.5)
        assert factor_escala_matriz(phi.matriz, phi.P) == pytest.approx(np.log(4.0), abs=1e-12)
        assert factor_escala_matriz(phi.matriz, phi.Q) == pytest.approx(-np.log(4.0), abs=1e-12)
        Z = muestrear_esfera(2, 100, 15)
        assert np.allclose(factor_escala_matriz(phi.matriz, Z), scaling_factor(phi, Z), atol=1e-12)

    @pytest.mark.parametrize("k", [8, 32])
    def test_potencia_es_cociclo(self, k):
        """Test: La forma cerrada de Mᵏ coincide con la suma del cociclo de φ_a."""
        phi = mapa_focal(0.5)
        Z = muestrear_esfera(2, 100, 16)
        identidad = np.eye(3, dtype=complex)
        cerrado = factor_escala_matriz(potencia_conjugada(phi.matriz, identidad, k), Z)
        suma = cocycle_scaling(phi, k, Z)
        assert np.max(np.abs(cerrado - suma) / np.maximum(1.0, np.abs(suma))) <= 1e-10


class TestEspectro:
    """Tests para el espectro en los puntos fijos."""

    def test_espectro_un_medio(self):
        """Test: a = 1/2 da (4, 2) en P y (1/4, 1/2) en Q."""
        en_p, en_q = fixed_point_spectrum(mapa_focal(0.5))
        assert en_p.multiplicador_reeb == pytest.approx(4.0, abs=1e-8)
        assert en_p.multiplicador_contacto == pytest.approx(2.0, abs=1e-8)
        assert en_q.multiplicador_reeb == pytest.approx(0.25, abs=1e-8)
        assert en_q.multiplicador_contacto == pytest.approx(0.5, abs=1e-8)

    def test_espectro_nueve_decimos(self):
        """Test: a = 0.9 da (1/a², 1/a) en P."""
        en_p, _ = fixed_point_spectrum(mapa_focal(0.9))
        assert en_p.multiplicador_reeb == pytest.approx(1 / 0.81, abs=1e-8)
        assert en_p.multiplicador_contacto == pytest.approx(1 / 0.9, abs=1e-8)

    def test_reeb_es_cuadrado(self):
        """Test: multiplicador de Reeb = multiplicador de contacto² en varias dimensiones."""
        for n in (2, 3, 4):
            for e in fixed_point_spectrum(mapa_focal(0.3, n, eje=n)):
                assert e.multiplicador_reeb == pytest.approx(e.multiplicador_contacto ** 2, abs=1e-8)

    def test_requiere_familia_canonica(self):
        """Test: Un mapa genérico no tiene espectro canónico."""
        phi = MapaMoebius(MatrizSignatura(np.eye(3)))
        with pytest.raises(ErrorParametro):
            fixed_point_spectrum(phi)


class TestConjugador:
    """Tests para el conjugador σ y los puntos p, q."""

    def test_puntos_un_medio(self):
        """Test: b = 1/2 da p = (−4/5, 3/5) y q = (4/5, 3/5)."""
        c = build_conjugator(0.5, 2)
        assert np.allclose(c.p.coords, [-0.8, 0.6], atol=1e-15)
        assert np.allclose(c.q.coords, [0.8, 0.6], atol=1e-15)
        assert c.distancia_fibra == pytest.approx(np.arccos(7 / 25), abs=1e-12)

    def test_exactitud_racional(self):
        """Test: |⟨p, q⟩| = 7/25 en aritmética exacta."""
        p, q = puntos_conjugador_exactos(Fraction(1, 2))
        assert p == (Fraction(-4, 5), Fraction(3, 5))
        assert abs(p[0] * q[0] + p[1] * q[1]) == Fraction(7, 25)

    def test_margen_violado(self):
        """Test: b cerca de 1 deja p y q casi en la misma fibra."""
        with pytest.raises(ErrorParametro):
            build_conjugator(0.99, 2)

    def test_requiere_n_dos(self):
        """Test: En S¹ no hay conjugador."""
        with pytest.raises(ErrorParametro):
            build_conjugator(0.5, 1)

    def test_p_q_fijos_del_conjugado(self):
        """Test: σ∘φ∘σ⁻¹ fija p y q."""
        c = build_conjugator(0.5, 2)
        psi = conjugate(mapa_focal(0.5), c.sigma)
        assert fiber_distance(psi(c.p), c.p) <= 1e-12
        assert ambient_distance(psi(c.q), c.q) <= 1e-12


class TestIsotopia:
    """Tests para el camino de isotopía hacia la identidad."""

    def test_primer_elemento_cercano_a_identidad(self):
        """Test: φ_{1−1e−6} dista ≤ 1e−4 de la identidad."""
        camino = isotopy_path(0.5, 10)
        Z = muestrear_esfera(2, 1000, 14)
        assert np.max(ambient_distance(camino[0].aplicar(Z), Z)) <= 1e-4

    def test_camino_continuo(self):
        """Test: Mapas consecutivos están a distancia uniforme ≤ 0.1."""
        camino = isotopy_path(0.5, 100)
        Z = muestrear_esfera(2, 1000, 15)
        saltos = [distancia_uniforme(f, g, Z) for f, g in zip(camino, camino[1:])]
        assert max(saltos) <= 0.1

    def test_ultimo_elemento(self):
        """Test: El último mapa es el canónico con a = a_end."""
        camino = isotopy_path(0.5, 5)
        assert camino[-1].parametro == pytest.approx(0.5)
        assert np.allclose(camino[-1].matriz.entradas, canonical_matrix(0.5, 2).entradas)

    def test_pasos_insuficientes(self):
        """Test: steps < 2 es inválido."""
        with pytest.raises(ErrorParametro):
            isotopy_path(0.5, 1)
