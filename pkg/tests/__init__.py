# Paquete de tests de los experimentos de contactomorfismos
