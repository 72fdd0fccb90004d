"""
Módulo para dar formato de tabla a los resultados de los experimentos.
Cada método devuelve un string listo para imprimir en consola.
"""

from typing import List

ANCHO = 80


def _numero(valor, formato: str = ".3e") -> str:
    if valor is None:
        return "-"
    return f"{valor:{formato}}"


class FormateadorResultados:
    """
    Formatea espectros, tablas de decaimiento, defectos y certificados.
    """

    @staticmethod
    def mostrar_espectros(espectros: List[dict]) -> str:
        """
        Formatea los multiplicadores en los puntos fijos.

        Args:
            espectros (List[dict]): Espectros serializados (P y Q)

        Returns:
            str: Tabla con los multiplicadores
        """
        resultado = []
        resultado.append("\n" + "=" * ANCHO)
        resultado.append("ESPECTRO EN LOS PUNTOS FIJOS")
        resultado.append("=" * ANCHO)
        resultado.append(f"{'Punto':<10} {'Reeb':<20} {'Contacto':<20} {'Contacto²':<20}")
        resultado.append("-" * ANCHO)

        for nombre, e in zip(('P', 'Q'), espectros):
            c = e['multiplicador_contacto']
            resultado.append(
                f"{nombre:<10} "
                f"{e['multiplicador_reeb']:<20.12f} "
                f"{c:<20.12f} "
                f"{c * c:<20.12f}"
            )

        resultado.append("=" * ANCHO + "\n")
        return "\n".join(resultado)

    @staticmethod
    def mostrar_decaimiento(decaimiento: dict) -> str:
        """Formatea la tabla de localización de Σ_n."""
        filas = decaimiento.get('filas', [])
        if not filas:
            return "No hay filas en la tabla de decaimiento"

        resultado = []
        resultado.append("\n" + "=" * ANCHO)
        resultado.append("LOCALIZACIÓN DEL CONJUNTO CERO")
        resultado.append("=" * ANCHO)
        resultado.append(f"{'n':<6} {'sup|z − p|':<15} {'sup|ψn(z) − q|':<17} {'Muestra':<10} "
                         f"{'No res.':<10} {'Marca':<15}")
        resultado.append("-" * ANCHO)

        for f in filas:
            marca = "resolución" if f['resolucion_limitada'] else ("vacía" if f['aviso'] else "")
            resultado.append(
                f"{f['n']:<6} "
                f"{_numero(f['sup_dist_sigma_p']):<15} "
                f"{_numero(f['sup_dist_imagen_q']):<17} "
                f"{f['tamano_muestra']:<10} "
                f"{f['no_resueltos']:<10} "
                f"{marca:<15}"
            )

        estabilidad = decaimiento.get('estabilidad')
        if estabilidad:
            resultado.append("-" * ANCHO)
            resultado.append(f"Hausdorff entre semillas (n={estabilidad['n']}): "
                             f"{_numero(estabilidad['hausdorff'])}  "
                             f"(espaciado de la rejilla {_numero(estabilidad['espaciado_rejilla'])})")

        resultado.append("=" * ANCHO + "\n")
        return "\n".join(resultado)

    @staticmethod
    def mostrar_defectos(defectos: dict, certificados: dict) -> str:
        """Formatea el mínimo del defecto y el certificado para cada iterado."""
        if not defectos and not certificados:
            return "No hay búsquedas ni certificados"

        resultado = []
        resultado.append("\n" + "=" * ANCHO)
        resultado.append("DEFECTO Y CERTIFICADO DE SEPARACIÓN")
        resultado.append("=" * ANCHO)
        resultado.append(f"{'n':<6} {'min D':<13} {'g':<13} {'d_FS':<13} {'Certificado':<13} {'Margen':<13}")
        resultado.append("-" * ANCHO)

        for n in sorted(set(defectos) | set(certificados), key=int):
            d = defectos.get(n)
            c = certificados.get(n)
            comp = d['componentes'] if d else None
            estado = "-" if c is None else ("sí" if c['certificado'] else f"no ({c['condicion_fallida']})")
            resultado.append(
                f"{n:<6} "
                f"{_numero(d['min_total'] if d else None):<13} "
                f"{_numero(comp['componente_g'] if comp else None):<13} "
                f"{_numero(comp['componente_fibra'] if comp else None):<13} "
                f"{estado:<13} "
                f"{_numero(c['margen_fibra'] if c else None, '.4f'):<13}"
            )

        resultado.append("=" * ANCHO + "\n")
        return "\n".join(resultado)

    @staticmethod
    def mostrar_resumen(reporte: dict, tiempos: dict) -> str:
        """Resumen final: conclusión, código de salida y tiempos por etapa."""
        resultado = []
        resultado.append("\n" + "=" * ANCHO)
        resultado.append(f"RESUMEN ({reporte['suite']})")
        resultado.append("=" * ANCHO)

        for clave, valores in sorted(reporte.get('verificacion', {}).items()):
            detalle = ", ".join(f"{k}={v:.2e}" for k, v in sorted(valores.items()))
            resultado.append(f"Verificación {clave}: {detalle}")
        if reporte.get('circulo'):
            c = reporte['circulo']
            resultado.append(f"Circunferencia: {c['con_dos_ceros']}/{c['mapas']} mapas con ≥ 2 ceros, "
                             f"error de la integral {c['error_integral_max']:.2e}")
        if reporte.get('hamiltoniano'):
            h = reporte['hamiltoniano']
            resultado.append(f"Hamiltoniano {h['pesos']}: defecto crítico máximo "
                             f"{h['criticos']['max_defecto']:.2e}, no crítico {h['defecto_no_critico']:.2e}")

        resultado.append(f"Conclusión: {reporte['conclusion']} ({reporte['naturaleza']})")
        resultado.append(f"Código de salida: {reporte['codigo_salida']}")
        if tiempos:
            resultado.append("-" * ANCHO)
            for etapa, segundos in tiempos.items():
                resultado.append(f"{etapa:<15} {segundos:>10.2f} s")
        resultado.append("=" * ANCHO + "\n")
        return "\n".join(resultado)
