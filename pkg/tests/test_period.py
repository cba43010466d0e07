import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpdual.errors import ConvergenceError, DomainError
from lpdual.oracle import raw_radicand, theta_oracle
from lpdual.period import (
    Method,
    as_pair,
    beta_star,
    endpoint_residual,
    endpoint_u_minus,
    first_integral,
    integrand_raw,
    integrand_transformed,
    theta,
    theta_limit_r1,
    theta_limit_rinf,
    theta_quadrature,
    theta_value,
    xi,
)


def test_first_integral_examples():
    # -p q r^p ... for (1,2): E = -4 r / (r + 1)^2
    assert first_integral((1, 2), 3) == pytest.approx(-0.75, abs=1e-15)
    with mp.workdps(30):
        e = mp.e
        want = 1 / (e - 1) - mp.log(1 / (e - 1))
    assert first_integral((0, 1), math.e) == pytest.approx(float(want), rel=1e-14)


def test_first_integral_near_one_tends_to_limit():
    assert first_integral((1, 2), 1 + 1e-7) == pytest.approx(-1.0, abs=1e-6)


def test_endpoint_u_minus_ellipse():
    ends = endpoint_u_minus((-2, 2), 2)
    assert ends.u_minus == pytest.approx(2**-0.5, rel=1e-15)
    assert ends.u_plus / ends.u_minus == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("pq", [(1, 2), (-5, 5), (0, 5), (-3, -1), (2.5, 2.7)])
@pytest.mark.parametrize("r", [1.1, 3.0, 1e3])
def test_both_endpoints_satisfy_first_integral(pq, r):
    ends = endpoint_u_minus(pq, r)
    E = first_integral(pq, r)
    assert abs(endpoint_residual(pq, ends.u_minus, E)) < 1e-10 * max(1, abs(E))
    assert abs(endpoint_residual(pq, ends.u_plus, E)) < 1e-10 * max(1, abs(E))


def test_radicand_hand_value():
    # (1 + 3 * 0.5)^1 - 1.5^2
    assert integrand_raw((1, 2), 2.0, 1.5) == pytest.approx(0.25, abs=1e-14)


@pytest.mark.parametrize("pq", [(1, 2), (-4, 3), (0, 2), (-3, 0), (0.3, 0.31)])
def test_radicand_vanishes_at_ends(pq):
    r = 5.0
    assert abs(integrand_raw(pq, r, 1.0)) < 1e-14
    assert abs(integrand_raw(pq, r, r)) < 1e-12 * r * r


@pytest.mark.parametrize(
    "pq,r,x",
    [((1, 2), 2, 1.5), ((-5, 5), 30, 7), ((0, 5), 1e6, 10.0), ((-3, -1), 4, 3.9), ((4, 9), 1.001, 1.0005), ((0.5, 3), 100, 1.01)],
)
def test_radicand_matches_multiprecision(pq, r, x):
    with mp.workdps(50):
        want = float(raw_radicand(*pq, r, x))
    assert integrand_raw(pq, r, x) == pytest.approx(want, rel=1e-11)


def test_transformed_kernel_positive_example():
    assert integrand_transformed((0, 2), beta_star((0, 2)), 2.0, 0.0) > 0


def test_transformed_kernel_near_one():
    z = np.linspace(-0.9, 0.9, 7)
    got = integrand_transformed((-1, 3), 1.3, 1 + 1e-7, z)
    np.testing.assert_allclose(got, 4 * (1 - z * z), rtol=1e-5)


def test_ellipse_pair_kernel_independent_of_r():
    # for (-2, 2) with beta = 2 the transformed radicand does not depend on r
    z = np.linspace(-0.95, 0.95, 9)
    a = integrand_transformed((-2, 2), 2.0, 1.5, z)
    b = integrand_transformed((-2, 2), 2.0, 40.0, z)
    np.testing.assert_allclose(a, b, rtol=1e-10)


@pytest.mark.parametrize("r", [1.01, 2, 10, 1000, 1e8])
def test_exact_families_via_quadrature(raw_cfg, r):
    assert theta_value((1, 2), r, raw_cfg) == pytest.approx(math.pi, abs=1e-10)
    assert theta_value((-2, -1), r, raw_cfg) == pytest.approx(math.pi, abs=1e-10)
    assert theta_value((-2, 2), r, raw_cfg) == pytest.approx(math.pi / 2, abs=1e-10)


def test_exact_shortcut_method():
    v = theta((1, 2), 5)
    assert v.theta == math.pi and v.method is Method.EXACT_SPECIAL


# oracle values: mpmath tanh-sinh on the raw integral, 40 digits
ORACLE_POINTS = [
    (0.0, 5.0, 4.0),
    (-5.0, 5.0, 1.43),
    (4.0, 9.0, 1.7),
    (-3.0, -1.0, 3.0),
    (0.5, 1.0, 50.0),
    (-0.5, 0.25, 16.0),
    (-0.5, 2.0, 1e4),
    (2.0, 2.5, 1e6),
    (-7.0, -6.5, 1.05),
    (0.0, 10.0, 13.8),
]


@pytest.mark.parametrize("p,q,r", ORACLE_POINTS)
def test_theta_matches_oracle(raw_cfg, p, q, r):
    want = theta_oracle(p, q, r)
    assert theta_value((p, q), r, raw_cfg) == pytest.approx(want, rel=1e-11)


@pytest.mark.parametrize("p,q,r", ORACLE_POINTS[:5])
def test_default_path_matches_oracle(p, q, r):
    assert theta_value((p, q), r) == pytest.approx(theta_oracle(p, q, r), rel=1e-11)


def test_limits():
    assert theta_limit_r1((0, 4)) == pytest.approx(math.pi / 2)
    assert theta_limit_r1((1, 2)) == pytest.approx(math.pi)
    assert theta_limit_rinf((-1, 1)) == pytest.approx(math.pi / 2)
    assert theta_limit_rinf((1, 2)) == pytest.approx(math.pi)
    assert theta_limit_rinf((-2, -1)) == pytest.approx(math.pi)
    assert xi((4, 9)) == pytest.approx(10 / 9)
    assert xi((-1, 1)) == 2.0
    assert xi((-3, -1)) == pytest.approx(4 / 3)


def test_near_one_value():
    assert abs(theta_value((0, 4), 1 + 1e-6) - math.pi / 2) < 1e-9


def test_domain_errors():
    with pytest.raises(DomainError, match="requires p < q"):
        theta((3, 2), 2)
    with pytest.raises(DomainError):
        theta((0, 1), 1.0)
    with pytest.raises(DomainError):
        theta((0, 1), float("inf"))
    with pytest.raises(DomainError):
        as_pair((float("nan"), 1))


def test_exhausted_budget_raises(monkeypatch):
    from lpdual import period
    from lpdual.period import QuadratureConfig

    monkeypatch.setattr(period, "_double_exponential", lambda *a: (None, 1.0, 0))
    cfg = QuadratureConfig(base_nodes=8, max_nodes=16, rel_tol=1e-15)
    with pytest.raises(ConvergenceError):
        theta_quadrature((0, 5), 1e6, cfg)


@settings(max_examples=60, deadline=None)
@given(
    p=st.floats(-8, 8),
    d=st.floats(0.05, 10),
    lr=st.floats(0.01, 12),
)
def test_theta_positive_and_reflection_symmetric(p, d, lr):
    q, r = p + d, math.exp(lr)
    a = theta_value((p, q), r)
    assert math.isfinite(a) and a > 0
    b = theta_value((-q, -p), r)
    assert a == pytest.approx(b, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(p=st.floats(-6, 6), d=st.floats(0.1, 8), lr=st.floats(0.05, 8))
def test_theta_between_limits_in_monotone_regions(p, d, lr):
    from lpdual.branches import monotone_class

    q = p + d
    if not monotone_class((p, q)).certain:
        return
    lo, hi = sorted((theta_limit_r1((p, q)), theta_limit_rinf((p, q))))
    v = theta_value((p, q), math.exp(lr))
    assert lo - 1e-9 <= v <= hi + 1e-9
