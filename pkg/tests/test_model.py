import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracheat.model import (
    ModelParams,
    ParameterError,
    existence_condition,
    exponents,
    necessity_precondition,
    p_growth_exponent,
    time_growth_exponent,
    validate,
)


def test_reference_exponents():
    ex = exponents(ModelParams(1, 0.5, 2.0, 0.75))
    assert ex.rho == pytest.approx((1.5 * 2 - 0.5) / 1.5)
    assert ex.alpha_H == pytest.approx(0.375)
    assert ex.beta_H == pytest.approx(0.375 * 2**-0.5)
    assert ex.m == 0.25 and ex.h == 0.75


@pytest.mark.parametrize(
    "beta, alpha, hurst, rho",
    [(2.0, 1.0, 0.75, 2.0), (1.0, 0.5, 0.75, 2.0), (2.0, 0.5, 0.6, (2.4 - 0.5) / 1.5)],
)
def test_rho_values(beta, alpha, hurst, rho):
    d = 2 if alpha >= 1 else 1
    assert exponents(ModelParams(d, alpha, beta, hurst)).rho == pytest.approx(rho, rel=1e-14)


def test_undefined_exponents_when_no_solution():
    ex = exponents(ModelParams(2, 1.0, 1.0, 0.75))
    assert not ex.rho_defined and math.isnan(ex.rho)
    ex = exponents(ModelParams(3, 1.5, 1.0, 0.75))
    assert not ex.rho_defined and not ex.delta_defined


def test_validate_reports_every_violation():
    with pytest.raises(ParameterError) as exc:
        validate(ModelParams(1, 1.5, 3.0, 0.4, a=2.0, b=1.0))
    probs = exc.value.problems
    assert set(probs) == {"alpha", "beta", "hurst", "b"}
    assert probs["alpha"] == "alpha must be < d"
    assert probs["hurst"] == "hurst must exceed 1/2"


@pytest.mark.parametrize("bad", [dict(d=0), dict(alpha=0.0), dict(beta=2.5), dict(hurst=1.0), dict(a=0.0)])
def test_validate_single_faults(bad):
    with pytest.raises(ParameterError) as exc:
        validate(ModelParams(1, 0.5, 2.0, 0.75).replace(**bad))
    assert set(exc.value.problems) == set(bad)


def test_growth_exponents():
    p = ModelParams(2, 1.0, 2.0, 0.75)
    assert time_growth_exponent(p) == pytest.approx(1.0)
    assert p_growth_exponent(p) == pytest.approx(3.0)
    assert necessity_precondition(ModelParams(1, 0.5, 2.0, 0.75))
    assert not necessity_precondition(ModelParams(1, 0.9, 0.5, 0.6))


@given(
    alpha=st.floats(0.05, 0.95),
    beta=st.floats(0.1, 2.0),
    hurst=st.floats(0.51, 0.99),
)
def test_rho_at_least_one_when_solution_exists(alpha, beta, hurst):
    p = ModelParams(1, alpha, beta, hurst)
    ex = exponents(p)
    assert ex.rho_defined == existence_condition(p)
    if ex.rho_defined:
        # rho = 1 + (2H-1) beta / (beta - alpha) > 1
        assert ex.rho > 1.0
        assert ex.delta < 1.0
        assert ex.rho == pytest.approx(1 + (2 * hurst - 1) * beta / (beta - alpha), rel=1e-12)
