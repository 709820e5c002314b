"""Chaos-coefficient bounds, the second-moment sandwich and exponent fits.

The n-th chaos coefficient of the solution is bounded by
``b^2 C^n t^(n(2H - alpha/beta)) / (n!)^(1 - alpha/beta)`` after division by
``n!``; summing gives ``b^2 E_h(C t^(2H - alpha/beta))`` with
``h = 1 - alpha/beta`` and ``E_h(x) = sum x^n / (n!)^h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln

from . import special as spc
from .model import ModelParams, exponents, validate
from .quad import QuadResult, SingularWeight, combine, divergence_probe, integrate_1d
from .sim import McEstimate, exp_moment, mc_mean

# number of leading log-terms materialised in a SeriesBound
_STORED_TERMS = 4096


class UnreliableEstimateError(RuntimeError):
    pass


def time_integral(lam: float, t: float, hurst: float, rtol: float = 1e-9) -> QuadResult:
    """``int_0^t int_0^t |r-s|^(2H-2) exp(-lam (r+s)) dr ds``.

    With ``v = |r - s|`` the inner integral is elementary:
    ``2 int_0^t v^(2H-2) e^(-lam v) (1 - e^(-2 lam (t-v))) / (2 lam) dv``.
    The layer of width ``1/lam`` at ``v = 0`` gets its own panel.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    gamma = 2.0 * hurst - 2.0
    if lam == 0:
        return QuadResult(2 * t ** (gamma + 2) / ((gamma + 1) * (gamma + 2)), 0.0, 1, True)

    def f(v):
        return math.exp(-lam * v) * -math.expm1(-2 * lam * (t - v)) / lam

    cut = min(t, 30.0 / lam)
    parts = [integrate_1d(f, (0.0, cut), tol=0.0, rtol=rtol, weight=SingularWeight(gamma, "left"))]
    if cut < t:
        # below e^-30 of the layer; tolerance relative to the total
        parts.append(integrate_1d(lambda v: v**gamma * f(v), (cut, t), tol=rtol * abs(parts[0].value)))
    return combine(*parts)


def alpha1_exact(params: ModelParams, t: float, rtol: float = 1e-6) -> QuadResult:
    """First chaos coefficient for ``u_0 = 1``, which equals ``E L(t)``.

    ``alpha_H C_riesz int_{R^d} T(|xi|^beta) |xi|^(alpha-d) dxi`` with ``T`` the
    time double integral of ``|r-s|^(2H-2) exp(-(r+s)|xi|^beta)`` (the same
    integral as with ``2t - r - s`` in the exponent, after ``r -> t - r``).
    ``T(lam) ~ Gamma(2H-1) lam^-2H`` for large ``lam``, so the spectral
    integral converges iff ``alpha < 2 H beta``; otherwise the divergence is
    confirmed numerically and returned with ``divergent=True``.
    """
    validate(params)
    H, al, be, d = params.hurst, params.alpha, params.beta, params.d
    pref = exponents(params).alpha_H * spc.riesz_constant(al, d)
    cd = spc.sphere_area(d)
    T = lambda r: time_integral(r**be, t, H, rtol=min(rtol * 1e-2, 1e-8)).value
    decay = 2 * H * be
    if al >= decay:
        probe = divergence_probe(lambda r: T(r) * r ** (al - 1), "infinity", start=64.0, n_shells=16)
        if probe.divergent:
            return QuadResult(math.inf, math.inf, len(probe.shells), False, True)
    res = integrate_1d(
        T,
        (0.0, math.inf),
        tol=0.0,
        rtol=rtol,
        weight=SingularWeight(al - 1.0, "origin"),
        decay=decay + 1.0 - al,
    )
    k = pref * cd
    return QuadResult(k * res.value, k * res.err_est, res.evals, res.converged)


def calibrate_c_growth(params: ModelParams) -> float:
    """Default geometric constant ``2 max(alpha_1(1), 1)``."""
    a1 = alpha1_exact(params, 1.0)
    if a1.divergent:
        raise ValueError("alpha_1 diverges; supply C_growth explicitly")
    return 2.0 * max(a1.value, 1.0)


@dataclass(frozen=True)
class SeriesBound:
    """Log-domain bound ``log(b^2 sum_n C^n t^(n g) / (n!)^h)`` on ``E|u(t,x)|^2``.

    ``log_terms`` holds the first terms (at most 4096) of the summand,
    excluding the ``b^2`` factor; ``n_used`` is the truncation index of the
    certified sum (``inf`` when the sum is exact in closed form).
    """

    params: ModelParams
    t: float
    C_growth: float
    log_terms: np.ndarray
    log_sum: float
    n_used: float
    certified_tail: bool
    divergent: bool
    method: str


def _log_terms(C: float, t: float, g: float, h: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return n * math.log(C) + n * g * math.log(t) - h * gammaln(n + 1)


def upper_bound_series(params: ModelParams, t: float, C_growth: float | None = None) -> SeriesBound:
    """Upper bound for the second moment via the chaos-coefficient estimate.

    For ``alpha < beta`` the series is summed by :func:`special.log_mittag_series`.
    For ``alpha = beta`` (``h = 0``) it is geometric and converges iff
    ``C t^(2H-1) < 1``; for ``alpha > beta`` the terms grow factorially and
    the verdict is divergence.
    """
    validate(params)
    if not t > 0:
        raise ValueError("t must be positive")
    C = calibrate_c_growth(params) if C_growth is None else float(C_growth)
    if not C > 0:
        raise ValueError("C_growth must be positive")
    m = params.alpha / params.beta
    h = 1.0 - m
    g = 2 * params.hurst - m
    x = C * t**g
    lb2 = 2 * math.log(params.b)
    if h > 0:
        val, last, method = spc.log_mittag_details(h, x)
        n_store = int(min(last, _STORED_TERMS)) if math.isfinite(last) else _STORED_TERMS
        terms = _log_terms(C, t, g, h, n_store)
        return SeriesBound(params, t, C, terms, lb2 + val, last, True, False, method)
    terms = _log_terms(C, t, g, h, 64)
    if h == 0 and x < 1:
        return SeriesBound(params, t, C, terms, lb2 - math.log1p(-x), math.inf, True, False, "geometric")
    return SeriesBound(params, t, C, terms, math.inf, math.nan, False, True, "divergent")


def p_moment_log_bound(params: ModelParams, p: float, t: float, C_growth: float | None = None) -> float:
    """``p log(b sum_n (p-1)^(n/2) (C^n t^(n g) / (n!)^h)^(1/2))``.

    Hypercontractivity bounds the p-norm of the n-th chaos by ``(p-1)^(n/2)``
    times its 2-norm; the sum is ``b E_(h/2)(sqrt((p-1) C t^g))``.
    """
    validate(params)
    if not p >= 2:
        raise ValueError("p must be >= 2")
    if not params.alpha < params.beta:
        return math.inf
    C = calibrate_c_growth(params) if C_growth is None else float(C_growth)
    m = params.alpha / params.beta
    h = 1.0 - m
    x = C * t ** (2 * params.hurst - m)
    return p * (math.log(params.b) + spc.log_mittag_series(h / 2, math.sqrt((p - 1) * x)))


@dataclass(frozen=True)
class Sandwich:
    lower: float
    upper: float
    mc_estimate: McEstimate


def second_moment_sandwich(params: ModelParams, t: float, L_samples) -> Sandwich:
    """``a^2 E e^L <= E|u(t,x)|^2 <= b^2 E e^L`` with ``E e^L`` estimated by Monte Carlo.

    ``t`` only labels the samples, which must be draws of ``L(t)``.
    """
    validate(params)
    est = exp_moment(L_samples, 1.0)
    if est.unreliable:
        raise UnreliableEstimateError(
            f"E exp(L({t})) is dominated by single samples (max share {est.max_term_share:.3g})"
        )
    return Sandwich(params.a**2 * est.mean, params.b**2 * est.mean, est)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    t_range: tuple


def exponent_fit(ts, log_values, window: tuple | None = None) -> FitResult:
    """Least-squares slope of ``log(log_value)`` against ``log t``."""
    t = np.asarray(ts, dtype=float)
    v = np.asarray(log_values, dtype=float)
    if t.shape != v.shape:
        raise ValueError("ts and log_values must have the same length")
    if window is not None:
        keep = (t >= window[0]) & (t <= window[1])
        t, v = t[keep], v[keep]
    if t.size < 3:
        raise ValueError("need at least 3 points in the window")
    if np.any(np.diff(t) <= 0):
        raise ValueError("ts must be increasing")
    if np.any(~(v > 0)):
        raise ValueError("log values must be positive in the window")
    lr = stats.linregress(np.log(t), np.log(v))
    r2 = min(1.0, max(0.0, lr.rvalue**2))
    return FitResult(float(lr.slope), float(lr.intercept), r2, (float(t[0]), float(t[-1])))


@dataclass(frozen=True)
class ZetaMomentReport:
    orders: tuple
    moments: tuple  # McEstimate per order
    ratios: tuple  # E zeta^n / (n!)^(alpha/beta)
    ratios_increasing: bool
    jensen: bool
    log_convex: bool | None
    heavy_tail: bool


def zeta_moment_growth(params: ModelParams, zeta_samples, n_max: int = 4) -> ZetaMomentReport:
    """Empirical moments of ``zeta(1)`` and their growth against ``(n!)^(alpha/beta)``."""
    if not 1 <= n_max <= 4:
        raise ValueError("n_max must lie in 1..4")
    z = np.asarray(zeta_samples, dtype=float)
    m = params.alpha / params.beta
    ests = tuple(mc_mean(z**n) for n in range(1, n_max + 1))
    ratios = tuple(e.mean / math.factorial(n) ** m for n, e in enumerate(ests, start=1))
    inc = all(b >= a for a, b in zip(ratios, ratios[1:]))
    jensen = n_max < 2 or ests[1].mean >= ests[0].mean ** 2
    convex = None
    if n_max == 4:
        # moment log-convexity, tested on E zeta^n (the factorial factors only help)
        convex = ests[1].mean * ests[3].mean >= ests[2].mean ** 2
    return ZetaMomentReport(
        tuple(range(1, n_max + 1)), ests, ratios, inc, jensen, convex, ests[-1].max_term_share > 0.05
    )
