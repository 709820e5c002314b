"""Problem parameters and the scalar exponents derived from them.

A problem instance is the tuple ``(d, alpha, beta, hurst, a, b)``: spatial
dimension, Riesz exponent of the spatial covariance ``|x|^-alpha``, order of
the fractional Laplacian, temporal Hurst index, and the lower/upper bounds of
the initial condition.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


class ParameterError(ValueError):
    """Raised when a :class:`ModelParams` violates one or more constraints.

    ``problems`` maps field name to a human readable diagnostic.
    """

    def __init__(self, problems: dict[str, str]):
        self.problems = dict(problems)
        super().__init__("; ".join(self.problems.values()))


@dataclass(frozen=True)
class ModelParams:
    d: int
    alpha: float
    beta: float
    hurst: float
    a: float = 1.0
    b: float = 1.0

    def as_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> "ModelParams":
        return ModelParams(**{**asdict(self), **changes})


@dataclass(frozen=True)
class ExponentSet:
    """Derived exponents; ``rho``/``delta`` are NaN when their flag is False."""

    rho: float
    delta: float
    alpha_H: float
    beta_H: float
    m: float
    h: float
    rho_defined: bool
    delta_defined: bool


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged, or raise :class:`ParameterError`.

    Every violated constraint is reported, not only the first one.
    """
    p = params
    problems: dict[str, str] = {}
    if not isinstance(p.d, int) or isinstance(p.d, bool) or p.d < 1:
        problems["d"] = "d must be a positive integer"
    if not (p.alpha > 0):
        problems["alpha"] = "alpha must be > 0"
    elif "d" not in problems and not (p.alpha < p.d):
        problems["alpha"] = "alpha must be < d"
    if not (0 < p.beta <= 2):
        problems["beta"] = "beta must lie in (0, 2]"
    if not (p.hurst > 0.5):
        problems["hurst"] = "hurst must exceed 1/2"
    elif not (p.hurst < 1):
        problems["hurst"] = "hurst must be < 1"
    if not (p.a > 0):
        problems["a"] = "a must be > 0"
    if not (p.b >= p.a):
        problems["b"] = "b must be >= a"
    if problems:
        raise ParameterError(problems)
    return params


def exponents(params: ModelParams) -> ExponentSet:
    p = params
    H, al, be = p.hurst, p.alpha, p.beta
    alpha_H = H * (2 * H - 1)
    beta_H = alpha_H * 2.0 ** (2 * H - 2)
    m = al / be
    h = 1.0 - m
    exists = al < be
    rho_defined = exists and (be - al) != 0
    delta_defined = exists and (2 * be - al) != 0
    rho = (2 * H * be - al) / (be - al) if rho_defined else math.nan
    delta = (2 * H * be - al) / (2 * be - al) if delta_defined else math.nan
    return ExponentSet(
        rho=rho,
        delta=delta,
        alpha_H=alpha_H,
        beta_H=beta_H,
        m=m,
        h=h,
        rho_defined=rho_defined,
        delta_defined=delta_defined,
    )


def existence_condition(params: ModelParams) -> bool:
    """True iff a mild solution exists, i.e. ``alpha < beta``."""
    return params.alpha < params.beta


def necessity_precondition(params: ModelParams) -> bool:
    """True iff the first chaos coefficient (and ``E[L(t)]``) is finite."""
    return params.alpha < 2 * params.hurst * params.beta


def time_growth_exponent(params: ModelParams) -> float:
    """Power of ``t`` multiplying ``C^n`` in the n-th coefficient bound: ``2H - alpha/beta``."""
    return 2 * params.hurst - params.alpha / params.beta


def p_growth_exponent(params: ModelParams) -> float:
    """Exponent of ``p`` in the p-th moment bound, ``(2 beta - alpha)/(beta - alpha)``."""
    return (2 * params.beta - params.alpha) / (params.beta - params.alpha)
