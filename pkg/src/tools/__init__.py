"""Spectral models, estimators and robustness experiments."""
