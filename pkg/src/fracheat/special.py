"""Closed-form constants and the log-domain series ``E_h(x) = sum x^n / (n!)^h``.

Fourier convention used throughout the package::

    F phi(xi) = int exp(-i xi.x) phi(x) dx

Under it the distributional transform of ``|x|^-alpha`` is
``kappa * |xi|^(alpha-d)`` and the Riesz energy identity reads

    int int phi(x) psi(y) |x-y|^-alpha dx dy = C_riesz int F phi conj(F psi) |xi|^(alpha-d) dxi

with ``C_riesz = (2 pi)^-d kappa``.  The gamma function is the standard
library's Lanczos implementation (:func:`math.gamma`, :func:`math.lgamma`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, logsumexp

TERM_CAP = 100_000
# above this Poisson mean the lattice sum is replaced by its Euler-Maclaurin integral
_ASYMPTOTIC_MEAN = 1.0e5
_TAIL_RTOL = 1e-16


class DomainError(ValueError):
    pass


class SeriesError(RuntimeError):
    """Series could not be certified within the term cap."""


def sphere_area(d: int) -> float:
    """Surface area ``c_d = 2 pi^(d/2) / Gamma(d/2)`` of the unit sphere in R^d."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def _check_riesz(alpha: float, d: int) -> None:
    if not (0 < alpha < d):
        raise DomainError(f"need 0 < alpha < d, got alpha={alpha}, d={d}")


def riesz_constant(alpha: float, d: int) -> float:
    """``pi^(-d/2) 2^-alpha Gamma((d-alpha)/2) / Gamma(alpha/2)``."""
    _check_riesz(alpha, d)
    return math.pi ** (-d / 2) * 2.0 ** (-alpha) * math.gamma((d - alpha) / 2) / math.gamma(alpha / 2)


def riesz_fourier_constant(alpha: float, d: int) -> float:
    """``kappa`` with ``F |x|^-alpha = kappa |xi|^(alpha-d)`` in S'(R^d)."""
    _check_riesz(alpha, d)
    return 2.0 ** (d - alpha) * math.pi ** (d / 2) * math.gamma((d - alpha) / 2) / math.gamma(alpha / 2)


def gaussian_negative_moment(alpha: float, d: int, t: float) -> float:
    """``E|Z|^-alpha`` for ``Z ~ N_d(0, 2 t I)``."""
    _check_riesz(alpha, d)
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    return 0.5 * riesz_constant(alpha, d) * sphere_area(d) * math.gamma(alpha / 2) * t ** (-alpha / 2)


def stable_negative_moment(alpha: float, beta: float, d: int) -> float:
    """``E|X_1|^-alpha`` for the symmetric beta-stable vector with ``E e^{i xi.X_1} = e^{-|xi|^beta}``."""
    if not (0 < beta <= 2):
        raise DomainError(f"need 0 < beta <= 2, got {beta}")
    if not (0 < alpha < min(d, 2 * beta)):
        raise DomainError(f"need 0 < alpha < min(d, 2 beta), got alpha={alpha}, beta={beta}, d={d}")
    return sphere_area(d) * riesz_constant(alpha, d) * math.gamma(alpha / beta) / beta


def bessel_riesz_integral(alpha: float, beta: float, d: int) -> float:
    """``int G_{d,beta}(x) |x|^-alpha dx``; ``inf`` when ``alpha >= beta``."""
    _check_riesz(alpha, d)
    if alpha >= beta:
        return math.inf
    return (
        riesz_constant(alpha, d)
        * sphere_area(d)
        * math.gamma((beta - alpha) / 2)
        * math.gamma(alpha / 2)
        / (2 * math.gamma(beta / 2))
    )


def raw_spectral_integral(alpha: float, beta: float, d: int) -> float:
    """``int (1+|xi|^2)^(-beta/2) |xi|^(alpha-d) dxi`` with no prefactor (``inf`` if alpha >= beta)."""
    _check_riesz(alpha, d)
    if alpha >= beta:
        return math.inf
    return sphere_area(d) * math.gamma(alpha / 2) * math.gamma((beta - alpha) / 2) / (2 * math.gamma(beta / 2))


def c_beta(beta: float) -> float:
    """The naive constant ``2^(beta/2 - 1)`` for the Bessel/Riesz supremum bound.

    For ``beta < 2`` it is below 1 and ``(1+s^2)^(beta/2) <= c (1 + s^beta)``
    fails at ``s = 0``; :func:`c_beta_valid` gives the smallest valid constant.
    """
    return 2.0 ** (beta / 2 - 1)


def c_beta_valid(beta: float) -> float:
    """Smallest ``c`` with ``(1+s^2)^(beta/2) <= c (1+s^beta)`` for all ``s >= 0``."""
    return max(1.0, 2.0 ** (beta / 2 - 1))


@dataclass(frozen=True)
class SpectralConstants:
    c_d: float
    C_riesz: float
    kappa: float
    c_beta: float
    C_stable_negmom: float
    I_bessel_riesz: float


def spectral_constants(alpha: float, beta: float, d: int) -> SpectralConstants:
    try:
        neg = stable_negative_moment(alpha, beta, d)
    except DomainError:
        neg = math.inf
    return SpectralConstants(
        c_d=sphere_area(d),
        C_riesz=riesz_constant(alpha, d),
        kappa=riesz_fourier_constant(alpha, d),
        c_beta=c_beta(beta),
        C_stable_negmom=neg,
        I_bessel_riesz=bessel_riesz_integral(alpha, beta, d),
    )


# ---------------------------------------------------------------------------
# E_h(x) = sum_n x^n / (n!)^h
#
# With y = x^(1/h) every term equals exp(h y) * p_n(y)^h where p_n(y) is the
# Poisson(y) mass at n, so
#     log E_h(x) = h y + log sum_n p_n(y)^h.
# The second term is >= 0 (p_n <= 1, h <= 1) and is evaluated separately, which
# keeps the result exactly above h x^(1/h) even when y is astronomically large.
# ---------------------------------------------------------------------------


def _g(u: np.ndarray) -> np.ndarray:
    """(1+u) log1p(u) - u, accurate near u = 0."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-2
    us = u[small]
    acc = np.zeros_like(us)
    for k in range(11, 1, -1):
        acc = acc * us + (-1.0) ** k / (k * (k - 1))
    out[small] = acc * us * us
    ub = u[~small]
    out[~small] = (1.0 + ub) * np.log1p(ub) - ub
    return out


def _stirling_remainder(n: np.ndarray) -> np.ndarray:
    """lgamma(n+1) - (n log n - n + 0.5 log(2 pi n)) for n >= 1."""
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    big = n >= 50
    nb = n[big]
    inv = 1.0 / nb
    inv2 = inv * inv
    out[big] = inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 / 1680)))
    ns = n[~big]
    out[~big] = gammaln(ns + 1) - (ns * np.log(ns) - ns + 0.5 * np.log(2 * np.pi * ns))
    return out


def _log_poisson(n: np.ndarray, y: float) -> np.ndarray:
    """log p_n(y) for real n >= 0, free of cancellation for large y."""
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    zero = n == 0
    out[zero] = -y
    nz = n[~zero]
    out[~zero] = -y * _g((nz - y) / y) - 0.5 * np.log(2 * np.pi * nz) - _stirling_remainder(nz)
    return out


def _log_power_sum_direct(y: float, h: float) -> tuple[float, int]:
    """log sum_n p_n(y)^h by explicit summation with geometric tail certificates."""
    spread = 12.0 * math.sqrt(max(y, 1.0) / h) + 20.0
    lo = max(0, int(math.floor(y - spread)))
    hi = int(math.ceil(y + spread))
    while True:
        if hi - lo + 1 > TERM_CAP:
            raise SeriesError(f"more than {TERM_CAP} terms needed (y={y:.6g}, h={h})")
        n = np.arange(lo, hi + 1, dtype=float)
        lt = h * _log_poisson(n, y)
        total = logsumexp(lt)
        ok = True
        # right tail: ratio of consecutive terms beyond hi is at most (y/(hi+1))^h < 1
        q = (y / (hi + 1)) ** h
        if q >= 1 or lt[-1] + math.log(q / (1 - q)) - total > math.log(_TAIL_RTOL):
            hi += int(spread) + 1
            ok = False
        if lo > 0:
            q = (lo / y) ** h
            if q >= 1 or lt[0] + math.log(q / (1 - q)) - total > math.log(_TAIL_RTOL):
                lo = max(0, lo - int(spread) - 1)
                ok = False
        if ok:
            return float(total), hi


def _log_power_sum_integral(y: float, h: float) -> float:
    """Euler-Maclaurin replacement of the lattice sum for large y.

    The summand is smooth on the scale sqrt(y/h) >= 300, so the difference
    between sum and integral is below exp(-2 pi^2 y / h) (Poisson summation).
    """
    s = math.sqrt(y)

    def integrand(z):
        nu = y + z * s
        # exponent of p_nu^h after removing -(h/2) log(2 pi y)
        u = z / s
        return math.exp(
            -h * y * float(_g(np.array([u]))[0])
            - 0.5 * h * math.log1p(u)
            - h * float(_stirling_remainder(np.array([nu]))[0])
        )

    zmax = 40.0 / math.sqrt(h)
    zmin = max(-zmax, (1.0 - y) / s)
    val, _ = integrate.quad(integrand, zmin, zmax, epsabs=0.0, epsrel=1e-13, limit=200, points=[0.0])
    return -0.5 * h * math.log(2 * math.pi * y) + math.log(s * val)


def log_mittag_details(h: float, x: float) -> tuple[float, float, str]:
    """Return ``(log E_h(x), last_index, method)``; see :func:`log_mittag_series`."""
    if not (0 < h <= 1):
        raise DomainError(f"need h in (0, 1], got {h}")
    if not (x > 0) or not math.isfinite(x):
        raise DomainError(f"need finite x > 0, got {x}")
    if h == 1.0:
        return float(x), math.inf, "exact"
    try:
        y = x ** (1.0 / h)
    except OverflowError:
        y = math.inf
    if not math.isfinite(h * y):
        raise OverflowError(f"log E_h(x) ~ h x^(1/h) exceeds double range (h={h}, x={x})")
    if y < 1.0:
        # few terms; sum in x directly (y may underflow)
        lx = math.log(x)
        N = 64
        while True:
            n = np.arange(0, N, dtype=float)
            lt = n * lx - h * gammaln(n + 1)
            total = float(logsumexp(lt))
            # term ratio beyond index N-1 is at most x / N^h < 1
            q = x / float(N) ** h
            if q < 1 and lt[-1] + math.log(q / (1 - q)) - total <= math.log(_TAIL_RTOL):
                return max(total, h * y), float(N - 1), "direct"
            if N >= TERM_CAP:
                raise SeriesError(f"uncertified tail (h={h}, x={x})")
            N = min(2 * N, TERM_CAP)
    if y <= _ASYMPTOTIC_MEAN:
        corr, hi = _log_power_sum_direct(y, h)
        method = "direct"
    else:
        corr = _log_power_sum_integral(y, h)
        hi = y + 40.0 * math.sqrt(y / h)
        method = "euler-maclaurin"
    return h * y + max(corr, 0.0), float(hi), method


def log_mittag_series(h: float, x: float) -> float:
    """``log sum_{n>=0} x^n / (n!)^h`` computed without overflow.

    Exact identity ``h = 1`` returns ``x``.  The result is always at least
    ``h * x**(1/h)``.
    """
    return log_mittag_details(h, x)[0]
