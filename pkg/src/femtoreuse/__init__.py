"""Frequency allocation and outage analysis for femtocell/macrocell networks."""

from .kernels import BACKEND
from .schemes import SchemeKind

__all__ = ["BACKEND", "SchemeKind"]
__version__ = "0.1.0"
