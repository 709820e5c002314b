"""Heat, Bessel and Riesz kernels, and numerical checks of the identities
linking them.

Every ``verify_*`` function computes both sides of an identity by
independent quadratures and returns an :class:`IdentityReport` holding both
sides and their relative gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special as sps

from . import special as spc
from .quad import (
    QuadResult,
    SingularWeight,
    combine,
    divergence_probe,
    integrate_1d,
    radial_spectral,
)


class UnsupportedError(NotImplementedError):
    pass


@dataclass(frozen=True)
class HeatKernel:
    beta: float
    d: int

    def __call__(self, t: float, x) -> float:
        return heat_kernel_point(self.beta, self.d, t, x)


@dataclass(frozen=True)
class BesselKernel:
    beta: float
    d: int

    def __call__(self, x) -> float:
        return bessel_kernel_point(self.beta, self.d, x)


@dataclass
class IdentityReport:
    name: str
    params: dict
    lhs: float
    rhs: float
    gap: float
    tol: float
    passed: bool
    extras: dict = field(default_factory=dict)


def _norm(x) -> float:
    return float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))


def _rel_gap(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def heat_kernel_point(beta: float, d: int, t: float, x, tol: float = 1e-13) -> float:
    """Density at ``x`` of ``X_t`` with ``E exp(i xi.X_t) = exp(-t |xi|^beta)``.

    ``beta = 2`` and ``beta = 1`` are closed forms in any dimension; other
    orders are computed for ``d = 1`` by cosine-transform quadrature.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if not 0 < beta <= 2:
        raise ValueError(f"beta must lie in (0, 2], got {beta}")
    r = _norm(x)
    if beta == 2:
        return (4 * math.pi * t) ** (-d / 2) * math.exp(-r * r / (4 * t))
    if beta == 1:
        return math.gamma((d + 1) / 2) / math.pi ** ((d + 1) / 2) * t / (t * t + r * r) ** ((d + 1) / 2)
    if d != 1:
        raise UnsupportedError(f"pointwise heat kernel for beta={beta} is only available for d=1")
    return _heat_kernel_1d_quad(beta, t, r, tol).value


_SERIES_FROM = 30.0  # scaled distance beyond which the tail series replaces quadrature


def _stable_tail_series(beta: float, t: float, r: float) -> float | None:
    """``(1/pi) sum_k (-1)^(k+1) Gamma(k beta + 1)/k! sin(k pi beta/2) t^k r^-(k beta + 1)``.

    Convergent for ``beta < 1`` and asymptotic otherwise; returns ``None``
    when the terms stop shrinking before reaching double precision.
    """
    lz = math.log(r) - math.log(t) / beta
    total = 0.0
    for k in range(1, 200):
        lmag = math.lgamma(k * beta + 1) - math.lgamma(k + 1) - k * beta * lz
        term = (-1) ** (k + 1) * math.exp(lmag) * math.sin(k * math.pi * beta / 2)
        total += term
        if k > 1 and math.exp(lmag) < 1e-17 * abs(total):
            return total / (math.pi * r)
        if k > 1 and lmag > prev:
            return None
        prev = lmag
    return None


def _heat_kernel_1d_quad(beta: float, t: float, r: float, tol: float = 1e-13) -> QuadResult:
    """(1/pi) int_0^inf cos(xi r) exp(-t xi^beta) dxi."""
    def f(xi):
        return math.exp(-t * xi**beta)

    z = r * t ** (-1.0 / beta)
    if z > _SERIES_FROM:
        v = _stable_tail_series(beta, t, r)
        if v is not None:
            return QuadResult(v, 1e-16 * abs(v), 1, True)
    tol = max(tol, 1e-14)
    res = None
    if z >= 1.0:
        res = integrate_1d(f, (0.0, math.inf), tol=tol, cos_frequency=r)
        if not (res.converged and abs(res.value) <= 1.0):
            res = None
    if res is None:
        res = integrate_1d(lambda xi: math.cos(xi * r) * f(xi), (0.0, math.inf), tol=tol, budget=2**18)
    return QuadResult(res.value / math.pi, res.err_est / math.pi, res.evals, res.converged)


_R_FLOOR = 1e-150  # keeps |x|^2/4 inside the normal double range


def bessel_kernel_point(beta: float, d: int, x, tol: float = 1e-13) -> float:
    """``G_{d,beta}(x) = Gamma(beta/2)^-1 int_0^inf u^(beta/2-1) e^-u (4 pi u)^(-d/2) e^(-|x|^2/(4u)) du``.

    Returns ``inf`` at ``x = 0`` when ``beta <= d`` (the kernel is unbounded there).
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    r = _norm(x)
    if r == 0:
        if beta <= d:
            return math.inf
        c = beta / 2 - 1 - d / 2
        res = integrate_1d(lambda u: math.exp(-u), (0.0, math.inf), tol=tol, weight=SingularWeight(c, "origin"))
        return (4 * math.pi) ** (-d / 2) / math.gamma(beta / 2) * res.value
    return math.exp(log_bessel_kernel(beta, d, r, tol))


def log_bessel_kernel(beta: float, d: int, r: float, tol: float = 1e-13) -> float:
    """``log G_{d,beta}(r)`` for ``r > 0``; stays finite where ``G`` itself would overflow."""
    r = max(float(r), _R_FLOOR)
    c = beta / 2 - 1 - d / 2
    q = r * r / 4
    # u = e^s turns the (possibly very wide) range of scales into a finite window;
    # the s-integrand is u^(c+1) e^(-u - q/u), mode written to avoid cancellation
    k = c + 1
    root = math.sqrt(k * k + r * r)
    mode = 0.5 * (k + root) if k >= 0 else r * r / (2 * (root - k))
    log_q = math.log(q)

    def L(s: float) -> float:
        if s > 700.0 or log_q - s > 700.0:
            return -math.inf
        return k * s - math.exp(s) - math.exp(log_q - s)

    s_mid = math.log(mode)
    peak = L(s_mid)
    f = lambda s: math.exp(L(s) - peak)
    # curvature width, capped: for k ~ 0 the top is flat over |log q|
    width = min(1.0 / math.sqrt(mode + q / mode), 1.0)
    ends = []
    for sign in (-1.0, 1.0):
        step = width
        while L(s_mid + sign * step) - peak > -50.0:
            step *= 2.0
        ends.append(s_mid + sign * step)
    lo = integrate.quad(f, ends[0], s_mid, epsabs=0.0, epsrel=tol, limit=400)[0]
    hi = integrate.quad(f, s_mid, ends[1], epsabs=0.0, epsrel=tol, limit=400)[0]
    return peak + math.log(lo + hi) - 0.5 * d * math.log(4 * math.pi) - math.lgamma(beta / 2)


def _bessel_folded(beta: float, d: int, r: float, power: float) -> float:
    """``G_{d,beta}(r) r^power`` evaluated in log space."""
    r = max(r, _R_FLOOR)
    return math.exp(log_bessel_kernel(beta, d, r) + power * math.log(r))


def _radial_bessel_integral(beta: float, d: int, power: float, tol: float = 1e-11) -> QuadResult:
    """``int_0^inf G_{d,beta}(r) r^power dr`` (exponentially decaying integrand)."""
    # G ~ r^(beta-d) near 0 (log for beta = d); fold the leading power into the weight
    e0 = power + min(beta - d, 0.0)
    if e0 <= -1:
        raise ValueError("integrand not integrable at the origin")

    def f(r):
        return _bessel_folded(beta, d, r, power - e0)

    return integrate_1d(f, (0.0, math.inf), tol=tol, weight=SingularWeight(e0, "origin"))


def bessel_mass(beta: float, d: int = 1, tol: float = 1e-11) -> QuadResult:
    """``int_{R^d} G_{d,beta}`` by radial quadrature (should be 1)."""
    cd = spc.sphere_area(d)
    res = _radial_bessel_integral(beta, d, d - 1.0, tol)
    return QuadResult(cd * res.value, cd * res.err_est, res.evals, res.converged)


def heat_kernel_mass(beta: float, t: float, tol: float = 1e-10) -> QuadResult:
    """``int_R G(t, x) dx`` for ``d = 1`` via quadrature of pointwise values."""
    if beta == 2:
        res = integrate_1d(lambda x: heat_kernel_point(2, 1, t, x), (0.0, math.inf), tol=tol)
    else:
        res = integrate_1d(
            lambda x: _heat_kernel_1d_quad(beta, t, x, tol=1e-14).value,
            (0.0, math.inf),
            tol=tol,
            decay=1.0 + beta,
        )
    return QuadResult(2 * res.value, 2 * res.err_est, res.evals, res.converged)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def _gauss1(v: float, s: float) -> float:
    """Centred 1-D Gaussian density with variance v at s."""
    return math.exp(-s * s / (2 * v)) / math.sqrt(2 * math.pi * v)


def parseval_sides(t1: float, t2: float, alpha: float, d: int, tol: float = 1e-12):
    """Both sides of the Riesz energy identity for two Gaussian heat kernels.

    Returns ``(lhs, raw_spectral)``: the left side computed in physical space
    and ``int F phi conj(F psi) |xi|^(alpha-d) dxi`` without prefactor.
    """
    v1, v2 = 2 * t1, 2 * t2

    def corr1(s: float) -> float:
        # int phi_1(y + s) psi_1(y) dy over R, split at the product's peak
        y0 = -s * v2 / (v1 + v2)
        f = lambda y: _gauss1(v1, y + s) * _gauss1(v2, y)
        right = integrate_1d(lambda u: f(y0 + u), (0.0, math.inf), tol=0.0, rtol=1e-13)
        left = integrate_1d(lambda u: f(y0 - u), (0.0, math.inf), tol=0.0, rtol=1e-13)
        return right.value + left.value

    k0 = corr1(0.0) ** (d - 1)
    e0 = d - 1.0 - alpha
    lhs = integrate_1d(lambda r: corr1(r) * k0, (0.0, math.inf), tol=tol, weight=SingularWeight(e0, "origin"))
    lhs_val = spc.sphere_area(d) * lhs.value
    raw = radial_spectral(lambda r: math.exp(-(t1 + t2) * r * r), alpha, d, tol=tol)
    return lhs_val, raw.value


def verify_parseval(t1: float, t2: float, alpha: float, d: int, tol: float = 1e-5) -> IdentityReport:
    """Riesz energy identity for the heat kernels ``G_2(t1, .)`` and ``G_2(t2, .)``."""
    if not 0 < alpha < d:
        raise ValueError("need 0 < alpha < d")
    lhs, raw = parseval_sides(t1, t2, alpha, d)
    C = spc.riesz_constant(alpha, d)
    rhs = C * raw
    gap = _rel_gap(lhs, rhs)
    return IdentityReport(
        "parseval",
        dict(t1=t1, t2=t2, alpha=alpha, d=d),
        lhs,
        rhs,
        gap,
        tol,
        gap < tol,
        dict(raw_spectral=raw, implied_constant=lhs / raw, C_riesz=C,
             closed_form=spc.gaussian_negative_moment(alpha, d, t1 + t2)),
    )


def bessel_riesz_lhs(alpha: float, beta: float, d: int, tol: float = 1e-11) -> QuadResult:
    """``int G_{d,beta}(x) |x|^-alpha dx`` by radial quadrature of the kernel."""
    cd = spc.sphere_area(d)
    if alpha >= beta:
        # G ~ r^(beta-d) at 0 so the radial integrand behaves like r^(beta-1-alpha)
        probe = divergence_probe(
            lambda r: bessel_kernel_point(beta, d, r) * r ** (d - 1 - alpha), "zero", start=1e-3, n_shells=16
        )
        return QuadResult(math.inf, math.inf, len(probe.shells), False, probe.divergent)
    res = _radial_bessel_integral(beta, d, d - 1.0 - alpha, tol)
    return QuadResult(cd * res.value, cd * res.err_est, res.evals, res.converged)


def dalang_integral(beta: float, alpha: float, d: int, tol: float = 1e-11) -> QuadResult:
    """``I_beta(mu) = int (1+|xi|^2)^(-beta/2) mu(dxi)`` with ``mu = C_riesz |xi|^(alpha-d) dxi``.

    Finite iff ``alpha < beta``; the divergent case is detected by the
    dyadic-shell test and reported with ``divergent=True``.
    """
    C = spc.riesz_constant(alpha, d)
    res = radial_spectral(lambda r: (1.0 + r * r) ** (-beta / 2), alpha, d, tol=tol / C, decay=beta)
    if res.divergent:
        return res
    return QuadResult(C * res.value, C * res.err_est, res.evals, res.converged)


def verify_identity1(alpha: float, beta: float, d: int, tol: float = 1e-5) -> IdentityReport:
    """``int G_{d,beta} |x|^-alpha dx = I_beta(mu)`` plus the closed form.

    ``extras`` records the candidate spectral prefactors: the constant that
    reconciles the physical side with the raw spectral integral, the Riesz
    constant, and the closed form with and without a ``(2 pi)^d`` factor.
    """
    lhs = bessel_riesz_lhs(alpha, beta, d)
    rhs = dalang_integral(beta, alpha, d)
    closed = spc.bessel_riesz_integral(alpha, beta, d)
    raw = spc.raw_spectral_integral(alpha, beta, d)
    extras = dict(
        closed_form=closed,
        raw_spectral=raw,
        lhs_divergent=lhs.divergent,
        rhs_divergent=rhs.divergent,
        C_riesz=spc.riesz_constant(alpha, d),
        kappa=spc.riesz_fourier_constant(alpha, d),
        # candidate with an extra (2 pi)^d in front of the raw integral
        raw_times_2pi_d=raw * (2 * math.pi) ** d,
    )
    if alpha >= beta:
        both = lhs.divergent and rhs.divergent
        extras["validated_constant"] = math.nan
        return IdentityReport("identity1", dict(alpha=alpha, beta=beta, d=d), lhs.value, rhs.value,
                              0.0 if both else math.inf, tol, both, extras)
    gap = _rel_gap(lhs.value, rhs.value)
    gap_closed = _rel_gap(lhs.value, closed)
    extras["gap_closed_form"] = gap_closed
    extras["validated_constant"] = lhs.value / raw
    return IdentityReport(
        "identity1",
        dict(alpha=alpha, beta=beta, d=d),
        lhs.value,
        rhs.value,
        gap,
        tol,
        gap < tol and gap_closed < tol,
        extras,
    )


def _identity2_lhs(alpha: float, beta: float, d: int, a: float, tol: float):
    """(real part, imaginary residual) of ``int e^{i a.x} G_{d,beta}(x) |x|^-alpha dx``."""
    e0 = min(beta, d) - 1.0 - alpha
    if d == 1:
        wt = SingularWeight(e0, "origin")
        fold = lambda r: _bessel_folded(beta, d, r, -alpha - e0)
        re = integrate_1d(lambda r: 2.0 * math.cos(a * r) * fold(r), (0.0, math.inf), tol=tol, weight=wt)
        if a == 0:
            return re.value, 0.0
        # imaginary part from each half-line separately
        pos = integrate_1d(lambda r: math.sin(a * r) * fold(r), (0.0, math.inf), tol=tol, weight=wt)
        # the kernel is even, so this mirrors ``pos`` with the sign of x flipped
        neg = integrate_1d(lambda r: math.sin(a * -r) * fold(abs(-r)), (0.0, math.inf), tol=tol, weight=wt)
        return re.value, pos.value + neg.value
    if a == 0:
        return bessel_riesz_lhs(alpha, beta, d).value, 0.0
    nu = d / 2 - 1
    # radial Fourier transform; J_nu(a r) r^(d/2) ~ r^(d-1) near 0
    j0 = 1.0 / (2.0**nu * math.gamma(nu + 1))

    def fold(r):
        z = a * r
        jz = sps.jv(nu, z) * z ** (-nu) if z > 1e-8 else j0
        return jz * _bessel_folded(beta, d, r, d - 1 - alpha - e0)

    # (2 pi)^(d/2) a^(1-d/2) int J_nu(a r) r^(d/2) F(r) dr, rewritten with (a r)^-nu J_nu(a r)
    re = integrate_1d(fold, (0.0, math.inf), tol=tol, weight=SingularWeight(e0, "origin"))
    return (2 * math.pi) ** (d / 2) * re.value, 0.0


def shifted_spectral(alpha: float, beta: float, d: int, a: float, tol: float = 1e-11) -> float:
    """``int (1+|xi - a e_1|^2)^(-beta/2) C_riesz |xi|^(alpha-d) dxi`` by quadrature."""
    C = spc.riesz_constant(alpha, d)
    if d == 1:
        phi = lambda r: (1 + (r - a) ** 2) ** (-beta / 2) + (1 + (r + a) ** 2) ** (-beta / 2)
        res = integrate_1d(phi, (0.0, math.inf), tol=tol, weight=SingularWeight(alpha - 1, "origin"),
                           decay=beta + 1 - alpha)
        return C * res.value
    area = spc.sphere_area(d - 1)
    w = (d - 3) / 2

    def angular(r: float) -> float:
        A = 1 + r * r + a * a
        f = lambda c: (A - 2 * r * a * c) ** (-beta / 2)
        if w == 0:
            v = integrate.quad(f, -1, 1, epsabs=0.0, epsrel=1e-13, limit=200)[0]
        else:
            v = integrate.quad(f, -1, 1, weight="alg", wvar=(w, w), epsabs=0.0, epsrel=1e-13, limit=200)[0]
        return area * v

    res = integrate_1d(angular, (0.0, math.inf), tol=tol, weight=SingularWeight(alpha - 1, "origin"),
                       decay=beta + 1 - alpha)
    return C * res.value


def verify_identity2(alpha: float, beta: float, d: int, a_shift: float, tol: float = 1e-4) -> IdentityReport:
    """Shifted identity ``int e^{i a.x} G_{d,beta} f dx = int (1+|xi-a|^2)^(-beta/2) mu(dxi)``.

    The shift is ``a_shift * e_1``.  Also records ``rhs(a=0)`` so the
    supremum-at-zero property can be checked.
    """
    if not alpha < beta:
        raise ValueError("identity2 needs alpha < beta")
    a = abs(float(a_shift))
    lhs, imag = _identity2_lhs(alpha, beta, d, a, 1e-12)
    rhs = shifted_spectral(alpha, beta, d, a)
    rhs0 = rhs if a == 0 else shifted_spectral(alpha, beta, d, 0.0)
    gap = _rel_gap(lhs, rhs)
    return IdentityReport(
        "identity2",
        dict(alpha=alpha, beta=beta, d=d, a=a_shift),
        lhs,
        rhs,
        gap,
        tol,
        gap < tol and abs(imag) < 1e-8,
        dict(imag_residual=imag, rhs_at_zero=rhs0),
    )


def elem_lhs(alpha: float, beta: float, t: float, eta: float) -> float:
    """``int_R exp(-t|xi|^beta) |xi - eta|^(alpha-1) dxi`` (``d = 1``)."""
    def g(xi):
        return math.exp(-t * abs(xi) ** beta) * abs(xi - eta) ** (alpha - 1)

    # fold the |xi - eta|^(alpha-1) factor into the endpoint weight
    h = lambda xi: math.exp(-t * abs(xi) ** beta)
    total = 0.0
    for sgn in (1.0, -1.0):
        wt = SingularWeight(alpha - 1, "origin")
        dist = sgn * (0.0 - eta)
        if dist > 0:
            near = integrate_1d(lambda v: h(eta + sgn * v), (0.0, dist), tol=1e-13, weight=wt)
            far = integrate_1d(lambda v: g(eta + sgn * (dist + v)), (0.0, math.inf), tol=1e-13)
            total += near.value + far.value
        else:
            total += integrate_1d(lambda v: h(eta + sgn * v), (0.0, math.inf), tol=1e-13, weight=wt).value
    return total


def elem_sup_integrand(alpha: float, beta: float, eta: float) -> float:
    """``int_R (1 + |xi - eta|^beta)^-1 |xi|^(alpha-1) dxi`` (``d = 1``)."""
    phi = lambda r: 1.0 / (1.0 + abs(r - eta) ** beta) + 1.0 / (1.0 + abs(r + eta) ** beta)
    return integrate_1d(phi, (0.0, math.inf), tol=1e-12, weight=SingularWeight(alpha - 1, "origin"),
                        decay=beta + 1 - alpha).value


@dataclass
class ElemIneqReport:
    params: dict
    K_estimate: float
    certified_constant: float
    naive_chain_constant: float
    points: list  # dicts with t, eta, lhs, rhs, certified_rhs, naive_rhs, ok
    violations: list
    scaling_spread: float  # relative spread of t^(alpha/beta) lhs(t, 0) across t
    passed: bool


def verify_elem_ineq(
    alpha: float,
    beta: float,
    ts=(0.1, 1.0, 10.0),
    etas=(0.0, 1.0, 10.0),
    sup_grid=(0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0),
    margin: float = 0.05,
) -> ElemIneqReport:
    """``int e^{-t|xi|^beta} |xi-eta|^(alpha-1) dxi <= K t^(-alpha/beta)`` on a grid (``d = 1``).

    ``K`` is the grid supremum of :func:`elem_sup_integrand` times
    ``1 + margin``.  Each point is also compared with the certified constant
    ``c I`` where ``I`` is the raw Bessel-Riesz spectral integral and ``c`` the
    smallest valid constant; the chain with the naive ``2^(beta/2-1)`` is
    recorded but not enforced.
    """
    if not alpha < beta:
        raise ValueError("elementary inequality needs alpha < beta")
    K = max(elem_sup_integrand(alpha, beta, e) for e in sup_grid) * (1 + margin)
    I_raw = spc.raw_spectral_integral(alpha, beta, 1)
    cert = spc.c_beta_valid(beta) * I_raw
    naive = spc.c_beta(beta) * I_raw
    points, bad = [], []
    for t in ts:
        for eta in etas:
            lhs = elem_lhs(alpha, beta, t, eta)
            s = t ** (-alpha / beta)
            ok = lhs <= K * s and lhs <= cert * s
            p = dict(t=t, eta=eta, lhs=lhs, rhs=K * s, certified_rhs=cert * s, naive_rhs=naive * s, ok=ok)
            points.append(p)
            if not ok:
                bad.append(p)
    scaled = [p["lhs"] * p["t"] ** (alpha / beta) for p in points if p["eta"] == 0.0]
    spread = (max(scaled) - min(scaled)) / max(scaled) if scaled else 0.0
    return ElemIneqReport(
        dict(alpha=alpha, beta=beta, d=1), K, cert, naive, points, bad, spread, not bad and spread < 1e-3
    )


def bessel_convolution_1d(order_a: float, order_b: float, x: float, tol: float = 1e-11) -> float:
    """``(G_{1,a} * G_{1,b})(x)`` for ``x > 0`` by quadrature with endpoint weights."""
    if not x > 0:
        raise ValueError("x must be positive")
    ea = min(order_a, 1.0) - 1.0
    eb = min(order_b, 1.0) - 1.0
    # folded kernels: G(v) v^-e is bounded at v = 0
    Fa = lambda v: _bessel_folded(order_a, 1, v, -ea)
    Fb = lambda v: _bessel_folded(order_b, 1, v, -eb)
    Ga = lambda v: _bessel_folded(order_a, 1, v, 0.0)
    Gb = lambda v: _bessel_folded(order_b, 1, v, 0.0)
    wts = [SingularWeight(ea, "left"), SingularWeight(eb, "right")]
    mid = integrate_1d(lambda y: Fa(y) * Fb(x - y), (0.0, x), tol=tol, weight=wts)
    left = integrate_1d(lambda v: Fa(v) * Gb(x + v), (0.0, math.inf), tol=tol, weight=SingularWeight(ea, "origin"))
    right = integrate_1d(lambda v: Ga(x + v) * Fb(v), (0.0, math.inf), tol=tol, weight=SingularWeight(eb, "origin"))
    return mid.value + left.value + right.value


def verify_semigroup(order_a: float, order_b: float, xs=None, tol: float = 1e-4) -> IdentityReport:
    """``G_{1,a} * G_{1,b} = G_{1,a+b}`` on a grid of ``x`` in ``[0.1, 5]``."""
    xs = np.linspace(0.1, 5.0, 12) if xs is None else np.asarray(xs, dtype=float)
    conv = np.array([bessel_convolution_1d(order_a, order_b, x) for x in xs])
    direct = np.array([bessel_kernel_point(order_a + order_b, 1, x) for x in xs])
    gaps = np.abs(conv - direct)
    i = int(np.argmax(gaps))
    return IdentityReport(
        "semigroup",
        dict(order_a=order_a, order_b=order_b, d=1),
        float(conv[i]),
        float(direct[i]),
        float(gaps[i]),
        tol,
        bool(gaps[i] < tol),
        dict(x=xs.tolist(), convolution=conv.tolist(), direct=direct.tolist()),
    )
