"""
Core module for ClusterCompiler.
"""

# Non importiamo nulla qui per evitare importazioni circolari
