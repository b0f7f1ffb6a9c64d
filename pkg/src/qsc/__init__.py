"""Quantitative social choice toolkit: Boolean Fourier analysis, Gaussian
noise stability, Condorcet paradoxes, manipulation of voting rules,
majority dynamics and information aggregation."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
