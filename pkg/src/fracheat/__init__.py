"""Numerical tools for moment growth of a space-fractional stochastic heat
equation driven by Gaussian noise that is fractional in time and
Riesz-correlated in space."""

from .model import ExponentSet, ModelParams, ParameterError, exponents, validate

__version__ = "0.1.0"

__all__ = ["ExponentSet", "ModelParams", "ParameterError", "exponents", "validate", "__version__"]
