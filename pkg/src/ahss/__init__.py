"""Exact Atiyah-Hirzebruch pages for skeletal filtrations of finite CW complexes."""

__version__ = "0.1.0"
