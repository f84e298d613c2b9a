"""
Nonparametric tests for associativity and Archimedeanity of bivariate copulas.
"""

__version__ = "1.0.0"

# Version of the JSON report / study schema written by the CLI.
SCHEMA_VERSION = "1.0"
