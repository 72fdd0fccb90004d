# Paquete src de los experimentos de contactomorfismos
