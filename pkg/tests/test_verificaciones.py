"""
Pruebas unitarias para el caso de la circunferencia y los Hamiltonianos
invariantes.
"""

import pytest
import sys
import os
import numpy as np

# Agregar el directorio src al path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from errores import ErrorParametro
from puntos_trasladados import defect
from verificaciones import (
    HamiltonianoInvariante,
    MapaCirculo,
    circle_zero_count,
    critical_points_are_translated,
    integral_circulo,
    invariant_flow,
    mapa_circulo_aleatorio,
    puntos_criticos,
)


class TestMapaCirculo:
    """Tests para los difeomorfismos de la circunferencia."""

    def test_seno_tiene_dos_ceros(self):
        """Test: θ + 0.3 sin θ tiene ceros de g en π/2 y 3π/2."""
        resultado = circle_zero_count(MapaCirculo([0.3]), 1024)
        assert resultado.cantidad == 2
        assert resultado.ceros == pytest.approx([np.pi / 2, 3 * np.pi / 2], abs=1e-10)
        assert not resultado.degenerado

    def test_rotacion_degenerada(self):
        """Test: Una rotación rígida es el caso degenerado g ≡ 0."""
        resultado = circle_zero_count(MapaCirculo(desplazamiento=1.0), 256)
        assert resultado.degenerado
        assert resultado.cantidad == 0

    def test_mapas_aleatorios(self):
        """Test: 100 mapas aleatorios tienen al menos dos ceros cada uno."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            phi = mapa_circulo_aleatorio(rng)
            assert circle_zero_count(phi, 4096).cantidad >= 2

    def test_integral_es_dos_pi(self):
        """Test: ∫ e^g dθ = 2π."""
        rng = np.random.default_rng(3)
        for _ in range(10):
            assert integral_circulo(mapa_circulo_aleatorio(rng)) == pytest.approx(2 * np.pi, abs=1e-6)

    def test_resolucion_insuficiente(self):
        """Test: resolution < 16 es inválida."""
        with pytest.raises(ErrorParametro):
            circle_zero_count(MapaCirculo([0.3]), 8)

    def test_derivada_no_positiva(self):
        """Test: Un levantamiento no creciente se rechaza."""
        with pytest.raises(ErrorParametro):
            MapaCirculo([1.5])

    def test_to_dict(self):
        """Test: La serialización conserva los coeficientes."""
        datos = MapaCirculo([0.1, 0.0], [0.05], 0.5).to_dict()
        assert datos['epsilon'] == [0.1, 0.0]
        assert datos['eta'] == [0.05, 0.0]
        assert datos['desplazamiento'] == 0.5


class TestFlujoHamiltoniano:
    """Tests para el flujo de H(z) = Σ aᵢ|zᵢ|²."""

    def test_tiempo_cero(self):
        """Test: El flujo en t = 0 es la identidad."""
        phi = invariant_flow(HamiltonianoInvariante([1.0, 2.0]), 0.0)
        assert np.allclose(phi.matriz, np.eye(2))

    def test_pesos_iguales_es_reeb(self):
        """Test: Con pesos (1, 1) el flujo es el de Reeb."""
        phi = invariant_flow(HamiltonianoInvariante([1.0, 1.0]), 0.5)
        z = np.array([0.6, 0.8j])
        assert np.allclose(phi.aplicar(z), np.exp(0.5j) * z)

    def test_pesos_distintos_en_pi(self):
        """Test: Con pesos (1, 2) en t = π se obtiene (−z₁, z₂)."""
        phi = invariant_flow(HamiltonianoInvariante([1.0, 2.0]), np.pi)
        z = np.array([0.6, 0.8j])
        assert np.allclose(phi.aplicar(z), [-0.6, 0.8j])

    def test_pesos_vacios(self):
        """Test: Un vector de pesos vacío es inválido."""
        with pytest.raises(ErrorParametro):
            HamiltonianoInvariante([])


class TestPuntosCriticos:
    """Tests para los puntos críticos de H como puntos trasladados."""

    def test_estratos(self):
        """Test: Cada peso distinto da un estrato."""
        H = HamiltonianoInvariante([1.0, 2.0, 1.0])
        assert H.estratos() == {1.0: [0, 2], 2.0: [1]}
        criticos = puntos_criticos(H, 8, 1)
        assert np.allclose(criticos[2.0][:, [0, 2]], 0.0)
        assert np.allclose(np.linalg.norm(criticos[1.0], axis=-1), 1.0)

    @pytest.mark.parametrize("t", [0.1, 1.0, np.pi])
    def test_criticos_son_trasladados(self, t):
        """Test: Los puntos críticos de H tienen defecto ≤ 1e−10."""
        reporte = critical_points_are_translated(HamiltonianoInvariante([1.0, 2.0]), [t])
        assert reporte.cumple
        assert reporte.max_defecto <= 1e-10

    def test_punto_no_critico(self):
        """Test: (1, 1)/√2 no es trasladado para t = 1."""
        phi = invariant_flow(HamiltonianoInvariante([1.0, 2.0]), 1.0)
        assert defect(phi, np.array([1.0, 1.0]) / np.sqrt(2)).total >= 1e-2

    def test_pesos_iguales_todo_trasladado(self):
        """Test: Con pesos (3, 3) todo punto es trasladado."""
        H = HamiltonianoInvariante([3.0, 3.0])
        reporte = critical_points_are_translated(H, [0.1, 1.0, np.pi])
        assert reporte.cumple
        assert list(reporte.por_estrato) == [3.0]
