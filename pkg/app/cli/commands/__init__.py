"""
Sottocomandi della CLI: ogni modulo espone register(subparsers) e handle(args).
"""
