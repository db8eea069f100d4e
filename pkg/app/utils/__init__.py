# app/utils/__init__.py
"""
Paquete de utilidades.
Acá no debería haber lógica de negocio, solo helpers reutilizables.
"""
