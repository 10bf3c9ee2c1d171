"""Whittle robustness lab."""
