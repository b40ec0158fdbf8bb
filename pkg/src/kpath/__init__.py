"""Simple k-path detection by algebraic fingerprinting over GF(2^w)."""

__version__ = "0.1.0"
