"""Periodic Fourier multipliers, Littlewood-Paley norms, Muckenhoupt weights
and a spectral solver for periodic second-order integro-differential equations."""

__version__ = "0.1.0"
