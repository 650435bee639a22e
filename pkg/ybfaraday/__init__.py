"""ybfaraday - Faraday rotation simulation and fitting toolkit for spin-polarized ytterbium."""

__version__ = "0.1.0"
