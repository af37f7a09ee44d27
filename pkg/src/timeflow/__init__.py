"""Numerical toolkit for phase operators, dilation trajectories, and
polarizer hidden-variable Bell analysis."""

from . import bell, dilation, fock, phase, polarizer
from .errors import NumericsError, ValidationError

__all__ = [
    "bell",
    "dilation",
    "fock",
    "phase",
    "polarizer",
    "NumericsError",
    "ValidationError",
]

__version__ = "0.1.0"
