"""
Utility di presentazione (diagrammi ASCII dei pattern).
"""
