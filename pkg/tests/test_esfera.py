"""
Pruebas unitarias para la geometría básica de la esfera S^{2n-1}.
"""

import pytest
import sys
import os
import numpy as np

# Agregar el directorio src al path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from errores import ErrorContrato
from esfera import (
    PuntoEsfera,
    VectorTangente,
    ambient_distance,
    contact_form,
    contact_form_real,
    espaciado_vecinos,
    fase_optima,
    fiber_distance,
    marco_tangente,
    muestrear_bola,
    muestrear_esfera,
    producto_hermitiano,
    reeb_vector,
    sample_sphere,
)


class TestPuntoEsfera:
    """Tests para la clase PuntoEsfera."""

    def test_renormaliza_coordenadas(self):
        """Test: Las coordenadas se proyectan sobre la esfera."""
        z = PuntoEsfera([3.0, 4.0j])
        assert np.linalg.norm(z.coords) == pytest.approx(1.0, abs=1e-15)
        assert z.n == 2

    def test_coordenadas_inmutables(self):
        """Test: Las coordenadas no se pueden modificar."""
        z = PuntoEsfera([1.0, 0.0])
        with pytest.raises(ValueError):
            z.coords[0] = 2.0

    def test_vector_nulo_invalido(self):
        """Test: El vector nulo no define un punto."""
        with pytest.raises(ValueError):
            PuntoEsfera([0.0, 0.0])

    def test_to_dict_y_from_dict(self):
        """Test: La serialización intercala partes real e imaginaria."""
        z = PuntoEsfera([0.6, 0.8j])
        datos = z.to_dict()
        assert datos['coords'] == pytest.approx([0.6, 0.0, 0.0, 0.8])
        assert np.allclose(PuntoEsfera.from_dict(datos).coords, z.coords)


class TestVectorTangente:
    """Tests para los vectores tangentes."""

    def test_vector_no_tangente(self):
        """Test: Un vector con componente radial no es tangente."""
        z = PuntoEsfera([1.0, 0.0])
        with pytest.raises(ValueError):
            VectorTangente(z, [1.0, 0.0])

    def test_proyectar(self):
        """Test: La proyección elimina la componente radial."""
        z = PuntoEsfera([1.0, 0.0])
        v = VectorTangente.proyectar(z, [1.0 + 1.0j, 2.0])
        assert np.allclose(v.vec, [1.0j, 2.0])


class TestFormaContacto:
    """Tests para la forma de contacto y el campo de Reeb."""

    def test_reeb_tiene_alfa_uno(self):
        """Test: α_z(R_z) = 1 en puntos aleatorios."""
        for z in sample_sphere(3, 20, 1):
            assert contact_form(z, reeb_vector(z)) == pytest.approx(1.0, abs=1e-14)

    def test_reeb_tangente(self):
        """Test: Re⟨R_z, z⟩ = 0 (R es tangente a la esfera)."""
        Z = muestrear_esfera(3, 200, 4)
        assert np.max(np.abs(producto_hermitiano(reeb_vector(Z), Z).real)) <= 1e-14

    def test_ejemplo_vector_tangente(self):
        """Test: α en z = (1, 0) sobre v = (i, 0) vale 1 y sobre (0, 1) vale 0."""
        z = PuntoEsfera([1.0, 0.0])
        assert contact_form(z, VectorTangente(z, [1.0j, 0.0])) == pytest.approx(1.0)
        assert contact_form(z, VectorTangente(z, [0.0, 1.0])) == pytest.approx(0.0)

    def test_formula_real_coincide(self):
        """Test: Im⟨v, z⟩ coincide con Σ (xᵢ dyᵢ − yᵢ dxᵢ)."""
        rng = np.random.default_rng(3)
        Z = muestrear_esfera(2, 50, rng)
        V = rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2))
        assert np.allclose(contact_form(Z, V), contact_form_real(Z, V), atol=1e-14)

    def test_base_distinta(self):
        """Test: Un vector basado en otro punto viola el contrato."""
        z = PuntoEsfera([1.0, 0.0])
        w = PuntoEsfera([0.0, 1.0])
        with pytest.raises(ErrorContrato):
            contact_form(w, VectorTangente(z, [0.0, 1.0]))


class TestDistancias:
    """Tests para las distancias entre puntos y fibras."""

    def test_distancia_fibra_misma_fibra(self):
        """Test: Puntos de la misma fibra de Hopf están a distancia 0."""
        z = PuntoEsfera([0.6, 0.8j])
        w = PuntoEsfera(np.exp(0.7j) * z.coords)
        assert fiber_distance(z, w) == pytest.approx(0.0, abs=1e-12)
        assert ambient_distance(z, w) > 0.1

    def test_distancia_fibra_ortogonal(self):
        """Test: Fibras ortogonales están a distancia π/2."""
        assert fiber_distance(PuntoEsfera([1.0, 0.0]), PuntoEsfera([0.0, 1.0])) == pytest.approx(np.pi / 2)

    def test_distancia_fibra_puntos_conjugador(self):
        """Test: d_FS((−4/5, 3/5), (4/5, 3/5)) = arccos(7/25)."""
        p = PuntoEsfera([-0.8, 0.6])
        q = PuntoEsfera([0.8, 0.6])
        assert fiber_distance(p, q) == pytest.approx(np.arccos(7 / 25), abs=1e-12)

    def test_distancia_ambiente_acotada(self):
        """Test: La distancia cordal está en [0, 2]."""
        Z = muestrear_esfera(2, 100, 5)
        W = muestrear_esfera(2, 100, 6)
        d = ambient_distance(Z, W)
        assert np.all(d >= 0.0) and np.all(d <= 2.0)
        assert ambient_distance(Z[0], -Z[0]) == pytest.approx(2.0)

    def test_distancia_fibra_simetrica(self):
        """Test: d_FS(z, w) = d_FS(w, z) y no cambia al rotar las fases."""
        Z = muestrear_esfera(2, 200, 21)
        W = muestrear_esfera(2, 200, 22)
        d = fiber_distance(Z, W)
        assert np.allclose(d, fiber_distance(W, Z), atol=1e-14)
        rotados = fiber_distance(np.exp(0.9j) * Z, np.exp(-2.3j) * W)
        assert np.allclose(d, rotados, atol=1e-12)
        assert np.all(d >= 0.0) and np.all(d <= np.pi / 2 + 1e-15)

    def test_desigualdad_triangular(self):
        """Test: d_FS cumple la desigualdad triangular en ternas aleatorias."""
        X = muestrear_esfera(2, 500, 23)
        Y = muestrear_esfera(2, 500, 24)
        Z = muestrear_esfera(2, 500, 25)
        assert np.all(fiber_distance(X, Z) <= fiber_distance(X, Y) + fiber_distance(Y, Z) + 1e-12)

    def test_fase_optima_alcanza_el_minimo(self):
        """Test: min_t ‖e^{it}z − w‖ se alcanza en la fase óptima y es 0 solo si d_FS = 0."""
        z = PuntoEsfera([0.6, 0.8j])
        misma = np.exp(1.1j) * z.coords
        u = fase_optima(z, misma)
        assert np.linalg.norm(u * z.coords - misma) <= 1e-12
        assert fiber_distance(z, misma) <= 1e-12

        w = muestrear_esfera(2, 1, 26)[0]
        u = fase_optima(z, w)
        minimo = np.linalg.norm(u * z.coords - w)
        t = np.linspace(0.0, 2 * np.pi, 4001)
        rejilla = np.linalg.norm(np.exp(1j * t)[:, None] * z.coords - w, axis=-1)
        assert minimo <= np.min(rejilla) + 1e-12
        assert minimo > 0.0 and fiber_distance(z, w) > 0.0
        assert fiber_distance(z, w) == pytest.approx(2 * np.arcsin(minimo / 2), abs=1e-12)


class TestMuestreo:
    """Tests para el muestreo de la esfera y de bolas."""

    def test_muestreo_reproducible(self):
        """Test: La misma semilla produce la misma muestra."""
        assert np.array_equal(muestrear_esfera(2, 10, 42), muestrear_esfera(2, 10, 42))

    def test_muestreo_vacio(self):
        """Test: count = 0 devuelve un arreglo vacío."""
        assert muestrear_esfera(2, 0, 1).shape == (0, 2)

    def test_puntos_unitarios(self):
        """Test: Todas las muestras tienen norma 1."""
        Z = muestrear_esfera(3, 1000, 7)
        assert np.allclose(np.linalg.norm(Z, axis=-1), 1.0, atol=1e-12)

    def test_bola_dentro_del_radio(self):
        """Test: muestrear_bola produce puntos dentro de la bola cordal."""
        c = PuntoEsfera([0.6, 0.8])
        B = muestrear_bola(c, 0.1, 500, 2)
        assert np.all(ambient_distance(B, c) <= 0.1 + 1e-12)

    def test_media_cercana_a_cero(self):
        """Test: La media empírica de sample_sphere(2, 10⁴, 1) tiene norma < 0.05."""
        puntos = sample_sphere(2, 10_000, 1)
        media = np.mean([z.coords for z in puntos], axis=0)
        assert np.linalg.norm(media) < 0.05

    def test_espaciado_positivo(self):
        """Test: El espaciado entre vecinos decrece con el tamaño de la rejilla."""
        grande = espaciado_vecinos(muestrear_esfera(2, 4000, 1))
        pequena = espaciado_vecinos(muestrear_esfera(2, 500, 1))
        assert 0.0 < grande < pequena


class TestMarcoTangente:
    """Tests para la base ortonormal del espacio tangente."""

    def test_marco_ortonormal_y_tangente(self):
        """Test: Las columnas son ortonormales y ortogonales a z."""
        Z = muestrear_esfera(2, 20, 9)
        E = marco_tangente(Z)
        assert E.shape == (20, 4, 3)
        X = np.concatenate([Z.real, Z.imag], axis=-1)
        assert np.allclose(np.einsum('bi,bij->bj', X, E), 0.0, atol=1e-12)
        assert np.allclose(np.swapaxes(E, -1, -2) @ E, np.eye(3), atol=1e-12)
