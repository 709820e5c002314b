import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gammaln

from fracheat import moments as Mo
from fracheat import sim
from fracheat import special as S
from fracheat.model import ModelParams
from fracheat.quad import weight_total

E_L_REF = 1.5363129870787563


def test_time_integral_frozen():
    # mpmath: 2 int_0^1 v^{-1/2} e^{-3v} (1 - e^{-6(1-v)}) / 6 dv
    assert Mo.time_integral(3.0, 1.0, 0.75).value == pytest.approx(0.329251828709146399, rel=1e-13)
    assert Mo.time_integral(1e-12, 2.0, 0.6).value == pytest.approx(weight_total(2.0, 0.6), rel=1e-9)


def test_alpha1_reference(ref_params):
    res = Mo.alpha1_exact(ref_params, 1.0)
    assert res.converged and not res.divergent
    assert res.value == pytest.approx(E_L_REF, rel=1e-8)


# mpmath: alpha_H E|X_1|^-alpha int_0^2 u^{-alpha/beta} min(u, 2-u)^{2H-1} / (2H-1) du
E_L_FROZEN = [
    (ModelParams(1, 0.5, 1.0, 0.6), 1.8067408137852523),
    (ModelParams(3, 1.2, 1.5, 0.8), 0.76311881873160696),
    (ModelParams(2, 0.7, 1.8, 0.9), 0.92209299949873522),
]


@pytest.mark.parametrize("params, oracle", E_L_FROZEN)
def test_alpha1_spectral_and_physical_routes(params, oracle):
    assert Mo.alpha1_exact(params, 1.0).value == pytest.approx(oracle, rel=1e-8)
    assert sim.mean_L_quadrature(params, 1.0, rtol=1e-8).value == pytest.approx(oracle, rel=1e-6)


@given(lam=st.floats(1e-8, 1e9), hurst=st.floats(0.55, 0.95))
def test_time_integral_bounds(lam, hurst):
    # 0 < T(lam) <= T(0) and T(lam) <= Gamma(2H-1) lam^{-2H}
    T = Mo.time_integral(lam, 1.0, hurst)
    assert T.converged
    assert 0 < T.value <= weight_total(1.0, hurst) * (1 + 1e-12)
    assert T.value <= math.gamma(2 * hurst - 1) * lam ** (-2 * hurst) * (1 + 1e-10)


def test_alpha1_time_scaling(ref_params):
    # alpha_1(t) = t^(2H - alpha/beta) alpha_1(1)
    r = Mo.alpha1_exact(ref_params, 2.0).value / Mo.alpha1_exact(ref_params, 1.0).value
    assert r == pytest.approx(2**1.25, rel=1e-8)


@pytest.mark.parametrize("params", [ModelParams(2, 1.5, 1.0, 0.7), ModelParams(1, 0.9, 0.5, 0.6)])
def test_alpha1_divergent(params):
    res = Mo.alpha1_exact(params, 1.0)
    assert res.divergent and math.isinf(res.value)


def test_calibration_needs_finite_alpha1():
    with pytest.raises(ValueError):
        Mo.calibrate_c_growth(ModelParams(2, 1.5, 1.0, 0.7))


def test_calibrated_constant(ref_params):
    assert Mo.calibrate_c_growth(ref_params) == pytest.approx(2 * E_L_REF, rel=1e-8)
    # alpha_1(1) < 1 is lifted to 1
    assert Mo.calibrate_c_growth(ModelParams(3, 0.3, 2.0, 0.55)) == 2.0


def test_series_bound_direct_sum():
    p = ModelParams(1, 0.5, 1.5, 0.7, a=0.5, b=1.5)
    sb = Mo.upper_bound_series(p, 0.8, C_growth=2.5)
    h, g = 1 - 1 / 3, 1.4 - 1 / 3
    n = np.arange(400)
    direct = 2 * math.log(1.5) + np.logaddexp.reduce(n * math.log(2.5 * 0.8**g) - h * gammaln(n + 1))
    assert sb.log_sum == pytest.approx(direct, rel=1e-13)
    assert sb.certified_tail and not sb.divergent
    np.testing.assert_allclose(sb.log_terms[:5], (n * math.log(2.5 * 0.8**g) - h * gammaln(n + 1))[:5], rtol=1e-13)


def test_series_bound_geometric_and_divergent():
    p = ModelParams(2, 1.0, 1.0, 0.75)
    sb = Mo.upper_bound_series(p, 1.0, C_growth=0.5)
    assert sb.method == "geometric" and sb.log_sum == pytest.approx(math.log(2.0))
    sb = Mo.upper_bound_series(p, 10.0, C_growth=0.5)
    assert sb.divergent and math.isinf(sb.log_sum)
    sb = Mo.upper_bound_series(ModelParams(3, 1.5, 1.0, 0.75), 1.0, C_growth=0.01)
    assert sb.divergent and sb.method == "divergent"


def test_series_bound_large_time_stays_finite(ref_params):
    sb = Mo.upper_bound_series(ref_params, 1e6, C_growth=3.0726)
    assert math.isfinite(sb.log_sum) and sb.method == "euler-maclaurin"
    assert sb.log_terms.size <= 4097


@given(t1=st.floats(0.01, 100.0), t2=st.floats(0.01, 100.0), C=st.floats(0.1, 10.0))
def test_series_bound_monotone_in_t(t1, t2, C):
    p = ModelParams(1, 0.5, 2.0, 0.75)
    lo, hi = sorted((t1, t2))
    a = Mo.upper_bound_series(p, lo, C_growth=C).log_sum
    b = Mo.upper_bound_series(p, hi, C_growth=C).log_sum
    assert a <= b + 1e-12 * abs(b)


def test_p_moment_bound():
    p = ModelParams(1, 0.5, 2.0, 0.75, b=2.0)
    x = 3.0
    v2 = Mo.p_moment_log_bound(p, 2, 1.0, C_growth=x)
    assert v2 == pytest.approx(2 * (math.log(2.0) + S.log_mittag_series(0.375, math.sqrt(x))), rel=1e-14)
    vals = [Mo.p_moment_log_bound(p, q, 1.0, C_growth=x) for q in (2, 3, 5, 8)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert Mo.p_moment_log_bound(ModelParams(2, 1.0, 1.0, 0.75), 2, 1.0, C_growth=1.0) == math.inf
    with pytest.raises(ValueError):
        Mo.p_moment_log_bound(p, 1.5, 1.0, C_growth=x)


def test_sandwich_and_bound_order(ref_params):
    out = sim.simulate_functionals(ref_params, 0.5, 64, 2000, seed=8, threads=4)
    p = ref_params.replace(a=0.5, b=2.0)
    sw = Mo.second_moment_sandwich(p, 0.5, out.L)
    assert sw.lower == pytest.approx(0.25 * sw.mc_estimate.mean)
    assert sw.upper == pytest.approx(4.0 * sw.mc_estimate.mean)
    ub = Mo.upper_bound_series(p, 0.5)
    assert math.log(sw.upper) <= ub.log_sum


def test_exp_moment_above_first_chaos(ref_params):
    # E e^L >= 1 + E L
    out = sim.simulate_functionals(ref_params, 0.25, 128, 4000, seed=12, threads=4)
    sw = Mo.second_moment_sandwich(ref_params, 0.25, out.L)
    assert sw.lower == sw.upper
    assert sw.lower >= 1 + Mo.alpha1_exact(ref_params, 0.25).value - 3 * sw.mc_estimate.stderr


def test_sandwich_refuses_dominated_estimate(ref_params):
    L = np.ones(100)
    L[0] = 30.0
    with pytest.raises(Mo.UnreliableEstimateError):
        Mo.second_moment_sandwich(ref_params, 1.0, L)


def test_exponent_fit_exact_power():
    t = np.logspace(0, 3, 12)
    fit = Mo.exponent_fit(t, 4.0 * t**1.7)
    assert fit.slope == pytest.approx(1.7, rel=1e-12) and fit.r_squared == pytest.approx(1.0)
    fit = Mo.exponent_fit(t, 4.0 * t**1.7 + 1e9 * (t < 10), window=(10.0, 1000.0))
    assert fit.slope == pytest.approx(1.7, rel=1e-12) and fit.t_range[0] >= 10


def test_exponent_fit_errors():
    with pytest.raises(ValueError):
        Mo.exponent_fit([1, 2], [1, 2])
    with pytest.raises(ValueError):
        Mo.exponent_fit([1, 3, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        Mo.exponent_fit([1, 2, 3], [1, -2, 3])
    with pytest.raises(ValueError):
        Mo.exponent_fit([1, 2, 3], [1, 2])


def test_zeta_moment_report_on_exponential_samples():
    # E X^n = n! for a unit exponential, so ratios are (n!)^(1 - alpha/beta)
    x = sim.RngStream(3, 0).generator().standard_exponential(200000)
    rep = Mo.zeta_moment_growth(ModelParams(1, 0.5, 2.0, 0.75), x)
    assert rep.orders == (1, 2, 3, 4)
    assert rep.ratios_increasing and rep.jensen and rep.log_convex
    for n, r in zip(rep.orders, rep.ratios):
        assert r == pytest.approx(math.factorial(n) ** 0.75, rel=0.1)
    with pytest.raises(ValueError):
        Mo.zeta_moment_growth(ModelParams(1, 0.5, 2.0, 0.75), x, n_max=5)
