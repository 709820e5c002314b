"""Deterministic quadrature.

* :func:`integrate_1d` - adaptive 1-D integration (QUADPACK via scipy) with
  declared algebraic endpoint singularities, a semi-infinite map
  ``x = a + u/(1-u)`` and optional cosine oscillation.
* :func:`radial_spectral` - ``int_{R^d} phi(|xi|) |xi|^(alpha-d) dxi`` reduced to
  a 1-D integral.
* :func:`time_square_weighted` - product integration of
  ``int int_{[0,t]^2} |r-s|^(2H-2) g(r,s) dr ds``: the weight is integrated
  exactly on every cell, ``g`` is sampled at cell centroids, and successive
  grid doublings are Richardson-extrapolated.
* :func:`divergence_probe` - dyadic-shell growth test used to certify that an
  integral is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .special import sphere_area

DEFAULT_BUDGET = 2**16
_LOCATIONS = ("left", "right", "origin", "diagonal")


class IntegrandError(ArithmeticError):
    """The integrand returned a non-finite value."""

    def __init__(self, x: float, value: float):
        self.abscissa = x
        self.value = value
        super().__init__(f"integrand returned {value!r} at x={x!r}")


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    evals: int
    converged: bool
    divergent: bool = False


@dataclass(frozen=True)
class SingularWeight:
    """Algebraic weight ``|x - x0|^exponent``; ``x0`` given by ``location``."""

    exponent: float
    location: str = "left"

    def __post_init__(self):
        if not self.exponent > -1:
            raise ValueError(f"weight exponent must exceed -1 for integrability, got {self.exponent}")
        if self.location not in _LOCATIONS:
            raise ValueError(f"location must be one of {_LOCATIONS}, got {self.location!r}")


def _guard(f: Callable[[float], float]) -> Callable[[float], float]:
    def g(x):
        v = f(x)
        if not math.isfinite(v):
            raise IntegrandError(x, v)
        return v

    return g


def _split_weights(weight) -> tuple[float, float]:
    left = right = 0.0
    if weight is None:
        return left, right
    ws = [weight] if isinstance(weight, SingularWeight) else list(weight)
    for w in ws:
        if w.location in ("left", "origin"):
            left = w.exponent
        elif w.location == "right":
            right = w.exponent
        else:
            raise ValueError("diagonal weights belong to time_square_weighted")
    return left, right


def _limit(budget: int) -> int:
    return max(4, budget // 25)


def integrate_1d(
    f: Callable[[float], float],
    interval: tuple[float, float],
    tol: float = 1e-10,
    weight: SingularWeight | Sequence[SingularWeight] | None = None,
    *,
    rtol: float = 0.0,
    budget: int = DEFAULT_BUDGET,
    decay: float | None = None,
    cos_frequency: float | None = None,
) -> QuadResult:
    """Integrate ``f(x) * w(x)`` over ``interval``.

    ``weight`` declares ``(x-a)^p`` (location ``left``/``origin``) and/or
    ``(b-x)^q`` (``right``); those factors multiply ``f`` and are integrated
    exactly by the endpoint rule.  For ``b = inf`` the integral is mapped to
    ``(0, 1)``; ``decay`` optionally declares that ``f*w ~ x^-decay`` at
    infinity, which becomes an endpoint weight of the mapped integrand.
    ``cos_frequency`` multiplies ``f`` by ``cos(omega x)`` (no singular
    weights allowed with it).

    Convergence means ``err_est <= max(tol, rtol*|value|)``.
    """
    a, b = interval
    if not math.isfinite(a):
        raise ValueError("left endpoint must be finite; split the interval")
    if b <= a:
        raise ValueError(f"empty interval {interval}")
    g = _guard(f)
    limit = _limit(budget)
    left, right = _split_weights(weight)
    opts = dict(epsabs=tol, epsrel=rtol, limit=limit, full_output=1)

    if cos_frequency is not None:
        if weight is not None:
            raise ValueError("cos_frequency cannot be combined with singular weights")
        omega = float(cos_frequency)
        if math.isinf(b):
            out = integrate.quad(g, a, b, weight="cos", wvar=omega, epsabs=tol, limlst=200, limit=limit, full_output=1)
        else:
            out = integrate.quad(g, a, b, weight="cos", wvar=omega, **opts)
        return _result(out, tol, rtol)

    if math.isinf(b):
        if right != 0.0:
            raise ValueError("a right-endpoint weight needs a finite endpoint; use decay=")
        mu = 0.0 if decay is None else decay - 2.0
        if mu <= -1:
            raise ValueError(f"declared decay {decay} is not integrable at infinity")
        lam = left
        one = np.nextafter(1.0, 0.0)

        def h(u):
            u = min(u, one)
            x = a + u / (1.0 - u)
            return g(x) * (1.0 - u) ** (-lam - 2.0 - mu)

        if lam == 0.0 and mu == 0.0:
            out = integrate.quad(h, 0.0, 1.0, **opts)
        else:
            out = integrate.quad(h, 0.0, 1.0, weight="alg", wvar=(lam, mu), **opts)
        return _result(out, tol, rtol)

    if left == 0.0 and right == 0.0:
        out = integrate.quad(g, a, b, **opts)
    else:
        out = integrate.quad(g, a, b, weight="alg", wvar=(left, right), **opts)
    return _result(out, tol, rtol)


def _result(out, tol: float, rtol: float) -> QuadResult:
    value, err, info = out[0], out[1], out[2]
    ier = out[4] if len(out) > 4 else 0
    evals = int(info.get("neval", 0)) if isinstance(info, dict) else 0
    value = float(value)
    err = float(abs(err))
    converged = ier == 0 and err <= max(tol, rtol * abs(value))
    return QuadResult(value, err, max(evals, 1), converged)


def combine(*parts: QuadResult, scale: float = 1.0) -> QuadResult:
    """Sum of independent quadrature results, optionally rescaled."""
    value = scale * sum(p.value for p in parts)
    err = abs(scale) * sum(p.err_est for p in parts)
    return QuadResult(
        value,
        err,
        sum(p.evals for p in parts),
        all(p.converged for p in parts),
        any(p.divergent for p in parts),
    )


@dataclass(frozen=True)
class ProbeResult:
    exponent: float  # local power of the integrand near the probed end
    divergent: bool
    shells: tuple


def divergence_probe(
    f: Callable[[float], float],
    side: str,
    *,
    start: float = 1.0,
    n_shells: int = 24,
    slack: float = 1e-3,
) -> ProbeResult:
    """Decide whether ``int f`` diverges at ``side`` ('zero' or 'infinity').

    Integrates ``f`` over dyadic shells walking towards the end and estimates
    the local power ``e`` from consecutive shell ratios (``f ~ x^e``).  The
    integral diverges at infinity iff ``e >= -1`` and at zero iff ``e <= -1``;
    ``slack`` absorbs quadrature noise on the boundary case.
    """
    if side not in ("zero", "infinity"):
        raise ValueError("side must be 'zero' or 'infinity'")
    step = 2.0 if side == "infinity" else 0.5
    shells = []
    lo = start
    for _ in range(n_shells):
        hi = lo * step
        x0, x1 = min(lo, hi), max(lo, hi)
        v, _ = integrate.quad(f, x0, x1, epsabs=0.0, epsrel=1e-12, limit=200)
        shells.append(v)
        lo = hi
    s = np.asarray(shells)
    if np.any(s <= 0):
        raise ValueError("divergence_probe expects a positive integrand")
    rates = np.log2(s[1:] / s[:-1])
    rate = float(np.median(rates[-4:]))
    # shell integral over [x, 2x] scales as x^(e+1)
    e = rate - 1.0 if side == "infinity" else -rate - 1.0
    divergent = e >= -1.0 - slack if side == "infinity" else e <= -1.0 + slack
    return ProbeResult(e, bool(divergent), tuple(shells))


def radial_spectral(
    phi: Callable[[float], float],
    alpha: float,
    d: int,
    tol: float = 1e-10,
    *,
    rtol: float = 0.0,
    decay: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """``int_{R^d} phi(|xi|) |xi|^(alpha-d) dxi = c_d int_0^inf phi(r) r^(alpha-1) dr``.

    ``decay`` declares ``phi(r) ~ r^-decay`` as ``r -> inf`` (``None`` means
    faster than any power).  When the declared tail is not integrable the
    divergence is confirmed by :func:`divergence_probe` and a divergent
    result with ``value = inf`` is returned.
    """
    cd = sphere_area(d)
    if decay is not None and decay + 1.0 - alpha <= 1.0:
        probe = divergence_probe(lambda r: phi(r) * r ** (alpha - 1.0), "infinity", start=64.0)
        if probe.divergent:
            return QuadResult(math.inf, math.inf, len(probe.shells), False, True)
        decay = None
    res = integrate_1d(
        phi,
        (0.0, math.inf),
        tol=tol / cd,
        weight=SingularWeight(alpha - 1.0, "origin"),
        rtol=rtol,
        budget=budget,
        decay=None if decay is None else decay + 1.0 - alpha,
    )
    return QuadResult(cd * res.value, cd * res.err_est, res.evals, res.converged)


# ---------------------------------------------------------------------------
# product integration of |r - s|^gamma on rectangular cells
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(3)
_FAR = 64.0  # distance/side ratio beyond which the 4-term formula loses digits


def _phi2(x: np.ndarray, gamma: float) -> np.ndarray:
    return np.abs(x) ** (gamma + 2.0) / ((gamma + 1.0) * (gamma + 2.0))


def cell_weights(edges_r: np.ndarray, edges_s: np.ndarray, gamma: float) -> np.ndarray:
    """Exact ``int_{cell} |r-s|^gamma dr ds`` for every cell of a tensor grid.

    ``gamma`` must lie in ``(-1, 0]``.  Cells far from the diagonal (relative
    to their size) use 3x3 Gauss-Legendre, where the weight is smooth and the
    closed form would cancel catastrophically.
    """
    if not -1.0 < gamma <= 0.0:
        raise ValueError(f"gamma must lie in (-1, 0], got {gamma}")
    er = np.asarray(edges_r, dtype=float)
    es = np.asarray(edges_s, dtype=float)
    r0, r1 = er[:-1, None], er[1:, None]
    s0, s1 = es[None, :-1], es[None, 1:]
    W = _phi2(r1 - s0, gamma) - _phi2(r0 - s0, gamma) - _phi2(r1 - s1, gamma) + _phi2(r0 - s1, gamma)

    hr, hs = r1 - r0, s1 - s0
    gap = np.maximum(np.maximum(s0 - r1, r0 - s1), 0.0)
    far = gap >= _FAR * np.maximum(hr, hs)
    if np.any(far):
        i, j = np.nonzero(far)
        a0, ha = er[i], er[i + 1] - er[i]
        b0, hb = es[j], es[j + 1] - es[j]
        acc = np.zeros(i.size)
        for xa, wa in zip(_GL_X, _GL_W):
            ra = a0 + 0.5 * ha * (xa + 1.0)
            for xb, wb in zip(_GL_X, _GL_W):
                sb = b0 + 0.5 * hb * (xb + 1.0)
                acc += wa * wb * np.abs(ra - sb) ** gamma
        W[i, j] = 0.25 * ha * hb * acc
    return W


def toeplitz_cell_weights(M: int, t: float, gamma: float) -> np.ndarray:
    """Cell weights of the uniform ``M x M`` grid on ``[0,t]^2`` by offset.

    Entry ``k + M - 1`` is the weight of any cell with ``i - j = k``.
    """
    h = t / M
    k = np.arange(-(M - 1), M, dtype=float)
    W = h ** (gamma + 2.0) * (_phi2(k + 1, gamma) - 2.0 * _phi2(k, gamma) + _phi2(k - 1, gamma))
    far = np.abs(k) - 1.0 >= _FAR
    if np.any(far):
        kk = k[far]
        acc = np.zeros(kk.size)
        for xa, wa in zip(_GL_X, _GL_W):
            for xb, wb in zip(_GL_X, _GL_W):
                acc += wa * wb * np.abs(kk + 0.5 * (xa - xb)) ** gamma
        W[far] = h ** (gamma + 2.0) * 0.25 * acc
    return W


@lru_cache(maxsize=32)
def _grid(M: int, t: float, gamma: float, grading: float):
    edges = t * (np.arange(M + 1) / M) ** grading
    edges[-1] = t
    W = cell_weights(edges, edges, gamma)
    W.setflags(write=False)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return mids, W


def time_square_weighted(
    g,
    t: float,
    hurst: float,
    tol: float = 1e-8,
    *,
    rtol: float = 0.0,
    m0: int = 16,
    max_M: int = 1024,
    grading: float = 1.0,
) -> QuadResult:
    """``int_0^t int_0^t |r-s|^(2H-2) g(r,s) dr ds`` by product integration.

    ``g`` is either a vectorised callable ``g(r, s)`` (broadcast over an
    ``M x M`` mesh) or a pair ``(g_r, g_s)`` meaning ``g = g_r(r) g_s(s)``.
    Grid nodes are ``t (k/M)^grading``; ``grading > 1`` concentrates cells
    near ``r, s = 0``.  Grids double from ``m0`` up to ``max_M`` with
    Richardson extrapolation at an estimated order; the error estimate is the
    change between the last two extrapolants.
    """
    if not 0.5 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (1/2, 1), got {hurst}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    gamma = 2.0 * hurst - 2.0
    separable = isinstance(g, tuple)
    sums: list[float] = []
    extrap: list[float] = []
    evals = 0
    M = m0
    err = math.inf
    best = math.nan
    while M <= max_M:
        mids, W = _grid(M, float(t), gamma, float(grading))
        if separable:
            gr, gs = g
            S = float(np.asarray(gr(mids), dtype=float) @ W @ np.asarray(gs(mids), dtype=float))
            evals += 2 * M
        else:
            vals = np.asarray(g(mids[:, None], mids[None, :]), dtype=float)
            S = float(np.sum(W * vals))
            evals += M * M
        if not math.isfinite(S):
            raise IntegrandError(math.nan, S)
        sums.append(S)
        if len(sums) >= 3:
            extrap.append(_extrapolate(sums[-3], sums[-2], sums[-1]))
        if len(extrap) >= 2:
            best = extrap[-1]
            err = abs(extrap[-1] - extrap[-2])
            if err <= max(tol, rtol * abs(best)):
                return QuadResult(best, err, evals, True)
        elif len(sums) >= 2:
            best = sums[-1]
            err = abs(sums[-1] - sums[-2])
        else:
            best = S
        M *= 2
    return QuadResult(best, err, evals, False)


def _extrapolate(s0: float, s1: float, s2: float) -> float:
    """Richardson step with the convergence order estimated from three levels.

    Smooth integrands give order 2; a singular corner of ``g`` combined with
    the diagonal weight gives fractional orders (e.g. ``2H - m`` for
    ``g = (r+s)^-m``).
    """
    d1, d2 = s1 - s0, s2 - s1
    if d2 == 0.0:
        return s2
    if d1 == 0.0 or d1 * d2 < 0:
        order = 2.0
    else:
        order = min(max(math.log2(d1 / d2), 0.5), 4.0)
    return s2 + d2 / (2.0**order - 1.0)


def weight_total(t: float, hurst: float) -> float:
    """``int int_{[0,t]^2} |r-s|^(2H-2) = t^(2H) / (H (2H-1))``."""
    return t ** (2 * hurst) / (hurst * (2 * hurst - 1))
