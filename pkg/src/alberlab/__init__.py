"""Stability of random sea states under the NLS equation: spectra, Alber kernel, simulation."""

__version__ = "0.1.0"
