"""Utility helpers: quantum numbers, unit conversion, series IO."""
