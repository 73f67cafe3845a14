"""Conditional term rewriting: unraveling, linearization and the SR transformation."""

__version__ = "0.1.0"

from ctrslab.kernels import BACKEND
from ctrslab.terms import App, Var

__all__ = ["App", "BACKEND", "Var", "__version__"]
