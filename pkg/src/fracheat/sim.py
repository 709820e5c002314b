"""Monte Carlo for the collision functionals of two independent stable paths.

A beta-stable Levy process is Brownian motion with variance 2 run on the
clock of an independent (beta/2)-stable subordinator.  Two independent
copies ``X1, X2`` give

    zeta(t) = int_0^t int_0^t |X1_r - X2_s|^-alpha dr ds
    L(t)    = alpha_H int_0^t int_0^t |r-s|^(2H-2) |X1_r - X2_s|^-alpha dr ds

Every path owns a counter-based Philox stream keyed by ``(seed, stream_id)``,
so the samples are bit-identical regardless of how paths are spread over
worker threads.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np
from scipy.special import kolmogorov, logsumexp

from . import special as spc
from .model import ModelParams, exponents
from .quad import cell_weights, time_square_weighted, toeplitz_cell_weights

_MASK64 = (1 << 64) - 1
# abort when exact float coincidences exceed this rate per cell
MAX_COINCIDENCE_RATE = 1e-6


class CoincidenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def sample_positive_stable(a: float, rng: np.random.Generator, size=None):
    """Positive a-stable draws with ``E exp(-lam S) = exp(-lam^a)`` (Kanter).

    ``S = (A(U) / E)^((1-a)/a)`` with ``U`` uniform on ``(0, pi)``, ``E`` unit
    exponential and ``A(u) = (sin(a u)^a sin((1-a) u)^(1-a) / sin u)^(1/(1-a))``.
    """
    if not 0 < a < 1:
        raise ValueError(f"stability index must lie in (0, 1), got {a}")
    u = rng.uniform(0.0, math.pi, size)
    e = rng.standard_exponential(size)
    return _kanter(a, u, e)


def _kanter(a: float, u, e):
    A = (np.sin(a * u) ** a * np.sin((1 - a) * u) ** (1 - a) / np.sin(u)) ** (1 / (1 - a))
    return (A / e) ** ((1 - a) / a)


def uniform_grid(t: float, M: int) -> np.ndarray:
    if not t > 0 or M < 1:
        raise ValueError("need t > 0 and M >= 1")
    g = t * np.arange(M + 1) / M
    g[-1] = t
    return g


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or g[0] != 0.0 or np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing and start at 0")
    return g


def _increments(beta: float, d: int, dt: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Increments of two independent paths, shape ``(2, M, d)``.

    The draw order is fixed (clock first, then Gaussians) so the batch
    simulator and :func:`sample_path_pair` consume streams identically.
    """
    M = dt.size
    if beta == 2:
        var = 2.0 * np.broadcast_to(dt, (2, M))
    else:
        S1 = sample_positive_stable(beta / 2, rng, (2, M))
        var = 2.0 * dt ** (2.0 / beta) * S1
    z = rng.standard_normal((2, M, d))
    return np.sqrt(var)[..., None] * z


@dataclass(frozen=True)
class PathPair:
    grid: np.ndarray
    X1: np.ndarray  # (M+1, d)
    X2: np.ndarray


def sample_path_pair(params: ModelParams, grid, rng: np.random.Generator) -> PathPair:
    g = _check_grid(grid)
    inc = _increments(params.beta, params.d, np.diff(g), rng)
    zero = np.zeros((1, params.d))
    X1 = np.concatenate([zero, np.cumsum(inc[0], axis=0)])
    X2 = np.concatenate([zero, np.cumsum(inc[1], axis=0)])
    return PathPair(g, X1, X2)


def _centroids(X: np.ndarray) -> np.ndarray:
    # positions at cell midpoints by linear interpolation between nodes
    return 0.5 * (X[:-1] + X[1:])


def _inverse_powers(pp: PathPair, alpha: float) -> tuple[np.ndarray, int]:
    Y1, Y2 = _centroids(pp.X1), _centroids(pp.X2)
    D2 = np.sum((Y1[:, None, :] - Y2[None, :, :]) ** 2, axis=-1)
    zero = D2 == 0.0
    n0 = int(np.count_nonzero(zero))
    if n0:
        if n0 > max(1.0, MAX_COINCIDENCE_RATE * D2.size):
            raise CoincidenceError(f"{n0} exact coincidences in {D2.size} cells")
        D2[zero] = 0.25 * np.min(D2[~zero])
    return D2 ** (-alpha / 2), n0


def functional_zeta(pp: PathPair, alpha: float) -> float:
    """Midpoint product rule for ``zeta(t)`` on the path grid."""
    V, _ = _inverse_powers(pp, alpha)
    h = np.diff(pp.grid)
    return float(h @ V @ h)


def functional_L(pp: PathPair, alpha: float, hurst: float) -> float:
    """Product rule for ``L(t)``: exact ``|r-s|^(2H-2)`` cell weights, path factor at centroids."""
    if not 0.5 < hurst < 1:
        raise ValueError("hurst must lie in (1/2, 1)")
    V, _ = _inverse_powers(pp, alpha)
    W = cell_weights(pp.grid, pp.grid, 2 * hurst - 2)
    return float(hurst * (2 * hurst - 1) * np.sum(W * V))


# ---------------------------------------------------------------------------
# batch simulation
# ---------------------------------------------------------------------------


@numba.njit(nogil=True, cache=True, fastmath=True)
def _pair_sums(Y1, Y2, w, alpha, L_out, z_out, n0_out):
    """Per path: sum_ij w[i-j] |Y1_i - Y2_j|^-alpha and sum_ij |Y1_i - Y2_j|^-alpha."""
    n, M, d = Y1.shape
    half = 0.5 * alpha
    # exact fast paths for common exponents
    mode = 0
    if alpha == 0.5:
        mode = 1
    elif alpha == 1.0:
        mode = 2
    elif alpha == 1.5:
        mode = 3
    for p in range(n):
        sL = 0.0
        sz = 0.0
        n0 = 0
        dmin = np.inf
        for i in range(M):
            for j in range(M):
                d2 = 0.0
                for k in range(d):
                    diff = Y1[p, i, k] - Y2[p, j, k]
                    d2 += diff * diff
                if d2 == 0.0:
                    n0 += 1
                    continue
                if d2 < dmin:
                    dmin = d2
                if mode == 1:
                    v = 1.0 / np.sqrt(np.sqrt(d2))
                elif mode == 2:
                    v = 1.0 / np.sqrt(d2)
                elif mode == 3:
                    r = np.sqrt(d2)
                    v = 1.0 / (r * np.sqrt(r))
                else:
                    v = d2 ** (-half)
                sL += w[i - j + M - 1] * v
                sz += v
        if n0 > 0:
            # replace each coincident distance by half the smallest nonzero one
            v = (0.25 * dmin) ** (-half)
            for i in range(M):
                for j in range(M):
                    d2 = 0.0
                    for k in range(d):
                        diff = Y1[p, i, k] - Y2[p, j, k]
                        d2 += diff * diff
                    if d2 == 0.0:
                        sL += w[i - j + M - 1] * v
                        sz += v
        L_out[p] = sL
        z_out[p] = sz
        n0_out[p] = n0


@dataclass(frozen=True)
class FunctionalSamples:
    """``L`` and ``zeta`` per path; entry ``i`` used stream ``stream_offset + i``."""

    L: np.ndarray
    zeta: np.ndarray
    seed: int
    stream_offset: int
    t: float
    M: int
    coincidences: int

    @property
    def streams(self) -> np.ndarray:
        return self.stream_offset + np.arange(self.L.size)


def _chunk_bounds(n: int, chunk: int):
    return [(i, min(i + chunk, n)) for i in range(0, n, chunk)]


def simulate_functionals(
    params: ModelParams,
    t: float,
    M: int,
    n_paths: int,
    seed: int,
    threads: int = 1,
    *,
    stream_offset: int = 0,
    chunk: int = 512,
) -> FunctionalSamples:
    """Sample ``(L(t), zeta(t))`` for ``n_paths`` path pairs on a uniform ``M``-cell grid."""
    if n_paths < 1:
        raise ValueError("n_paths must be positive")
    H = params.hurst
    alpha_H = exponents(params).alpha_H
    d = params.d
    h = t / M
    dt = np.full(M, h)
    w = np.ascontiguousarray(toeplitz_cell_weights(M, t, 2 * H - 2))
    L = np.empty(n_paths)
    Z = np.empty(n_paths)
    N0 = np.zeros(n_paths, dtype=np.int64)

    def work(bounds):
        i0, i1 = bounds
        Y1 = np.empty((i1 - i0, M, d))
        Y2 = np.empty((i1 - i0, M, d))
        for p in range(i0, i1):
            rng = RngStream(seed, stream_offset + p).generator()
            inc = _increments(params.beta, d, dt, rng)
            X = np.cumsum(inc, axis=1)
            # centroid of cell k is (X_k + X_{k+1}) / 2 with X_0 = 0
            Y1[p - i0, 0] = 0.5 * X[0, 0]
            Y1[p - i0, 1:] = 0.5 * (X[0, :-1] + X[0, 1:])
            Y2[p - i0, 0] = 0.5 * X[1, 0]
            Y2[p - i0, 1:] = 0.5 * (X[1, :-1] + X[1, 1:])
        _pair_sums(Y1, Y2, w, float(params.alpha), L[i0:i1], Z[i0:i1], N0[i0:i1])

    bounds = _chunk_bounds(n_paths, chunk)
    if threads <= 1:
        for b in bounds:
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds))
    n0 = int(N0.sum())
    if n0 > max(1.0, MAX_COINCIDENCE_RATE * n_paths * M * M):
        raise CoincidenceError(f"{n0} exact coincidences in {n_paths * M * M} cells")
    return FunctionalSamples(alpha_H * L, h * h * Z, seed, stream_offset, float(t), M, n0)


def write_samples_csv(path: str | os.PathLike, batches) -> None:
    """One row per path: ``seed, stream, t, L, zeta``."""
    if isinstance(batches, FunctionalSamples):
        batches = [batches]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["seed", "stream", "t", "L", "zeta"])
        for b in batches:
            for s, L, z in zip(b.streams, b.L, b.zeta):
                wr.writerow([b.seed, int(s), f"{b.t:.17g}", f"{L:.17g}", f"{z:.17g}"])


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_samples: int
    max_term_share: float
    unreliable: bool = False
    log_mean: float = math.nan


def mc_mean(samples) -> McEstimate:
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples")
    total = float(np.sum(np.abs(x)))
    share = float(np.max(np.abs(x)) / total) if total > 0 else 1.0
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(n))
    return McEstimate(mean, se, n, share, share > 0.05, math.log(mean) if mean > 0 else math.nan)


def exp_moment(samples, theta: float, n_batches: int = 20) -> McEstimate:
    """``E exp(theta s)`` in the log domain with batch-means standard error.

    Flagged unreliable when one sample carries more than 5% of the sum.
    """
    x = np.asarray(samples, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")
    if theta < 0:
        raise ValueError("theta must be >= 0")
    n = x.size
    if theta == 0:
        return McEstimate(1.0, 0.0, n, 1.0 / n, False, 0.0)
    lt = theta * x
    lse = float(logsumexp(lt))
    log_mean = lse - math.log(n)
    share = float(math.exp(np.max(lt) - lse))
    nb = max(2, min(n_batches, n))
    rel = np.array([math.exp(float(logsumexp(b)) - math.log(b.size) - log_mean) for b in np.array_split(lt, nb)])
    mean = math.exp(log_mean) if log_mean < 709 else math.inf
    se_rel = float(np.std(rel, ddof=1) / math.sqrt(nb))
    return McEstimate(mean, mean * se_rel, n, share, share > 0.05, log_mean)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float


def ks_two_sample(a, b) -> KsResult:
    """Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value."""
    x = np.sort(np.asarray(a, dtype=float))
    y = np.sort(np.asarray(b, dtype=float))
    if x.size == 0 or y.size == 0:
        raise ValueError("samples must be nonempty")
    pts = np.concatenate([x, y])
    Fx = np.searchsorted(x, pts, side="right") / x.size
    Fy = np.searchsorted(y, pts, side="right") / y.size
    D = float(np.max(np.abs(Fx - Fy)))
    en = math.sqrt(x.size * y.size / (x.size + y.size))
    return KsResult(D, float(min(1.0, kolmogorov(en * D))))


# ---------------------------------------------------------------------------
# deterministic oracles for the sampled means
# ---------------------------------------------------------------------------


def _square_sum_power(t: float, m: float) -> float:
    """``int_0^t int_0^t (r+s)^-m dr ds``."""
    if m == 1:
        return 2 * t * math.log(2.0)
    if m == 2:
        return math.inf
    return ((2 * t) ** (2 - m) - 2 * t ** (2 - m)) / ((1 - m) * (2 - m))


def mean_zeta_closed(params: ModelParams, t: float) -> float:
    """``E zeta(t) = E|X_1|^-alpha int int (r+s)^(-alpha/beta)`` since ``X1_r - X2_s ~ X_(r+s)``."""
    C = spc.stable_negative_moment(params.alpha, params.beta, params.d)
    return C * _square_sum_power(t, params.alpha / params.beta)


def mean_L_quadrature(params: ModelParams, t: float, rtol: float = 1e-7):
    """``E L(t) = alpha_H E|X_1|^-alpha int int |r-s|^(2H-2) (r+s)^(-alpha/beta)`` by product integration."""
    C = spc.stable_negative_moment(params.alpha, params.beta, params.d)
    m = params.alpha / params.beta
    q = time_square_weighted(lambda r, s: (r + s) ** (-m), t, params.hurst, tol=0.0, rtol=rtol, max_M=2048)
    k = exponents(params).alpha_H * C
    return q.__class__(k * q.value, k * q.err_est, q.evals, q.converged)


# ---------------------------------------------------------------------------
# sampler certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeCheck:
    probe: float
    empirical: float
    stderr: float
    exact: float

    @property
    def z(self) -> float:
        return abs(self.empirical - self.exact) / self.stderr if self.stderr > 0 else math.inf


def laplace_check(a: float, lambdas, n: int, seed: int, stream_id: int = 0) -> list[ProbeCheck]:
    """Empirical ``E exp(-lam S)`` against ``exp(-lam^a)``."""
    S = sample_positive_stable(a, RngStream(seed, stream_id).generator(), n)
    out = []
    for lam in lambdas:
        v = np.exp(-lam * S)
        out.append(ProbeCheck(float(lam), float(v.mean()), float(v.std(ddof=1) / math.sqrt(n)), math.exp(-(lam**a))))
    return out


def charfn_check(beta: float, d: int, t: float, xis, n: int, seed: int, stream_id: int = 0) -> list[ProbeCheck]:
    """Empirical ``E cos(xi X_t^(1))`` against ``exp(-t |xi|^beta)`` using the path sampler's increments."""
    rng = RngStream(seed, stream_id).generator()
    X = _increments(beta, d, np.full(n, float(t)), rng)[0, :, 0]
    out = []
    for xi in xis:
        v = np.cos(xi * X)
        out.append(ProbeCheck(float(xi), float(v.mean()), float(v.std(ddof=1) / math.sqrt(n)), math.exp(-t * abs(xi) ** beta)))
    return out
