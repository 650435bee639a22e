"""Atomic physics of the Yb 1S0 -> 1P1 line: data, coupling, lineshapes, rotation, pumping, polarimetry."""
