"""Infinite walls with Robin boundary conditions as limits of smooth and
piece-wise flat potentials, in wave-function and phase-space form."""
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "DEFAULT_CONSTANTS", "PhysicalConstants", "__version__"]
