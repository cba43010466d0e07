import math

import mpmath as mp
import pytest

from lpdual.asymptotics import (
    TailKind,
    integrand_expansion_check,
    phi_discriminant,
    power_tail_integral,
    series_near_one,
    tail_large_r,
)
from lpdual.errors import DomainError
from lpdual.period import beta_star, theta_value


def test_second_order_coefficient_examples():
    assert series_near_one((-2, 2)).c2 == 0
    assert series_near_one((1, 2)).c2 == 0
    assert series_near_one((0, 4)).c2 == pytest.approx(math.pi / 48, rel=1e-15)


@pytest.mark.parametrize("pq", [(1, 2), (-2, -1), (0, 0), (-2, 2)])
def test_phi_vanishes_on_exceptional_pairs(pq):
    assert phi_discriminant(pq) == 0


def test_second_order_fit_at_two_offsets(raw_cfg):
    s = series_near_one((0, 4))
    fits = [(theta_value((0, 4), 1 + d, raw_cfg) - s.c0) / d**2 for d in (1e-2, 5e-3)]
    # the fit converges linearly in d towards c2
    extrap = 2 * fits[1] - fits[0]
    assert extrap == pytest.approx(s.c2, rel=2e-3)


def test_log_tail_coefficients():
    assert tail_large_r((0, 5)).coefficient == pytest.approx(math.pi / 10)
    assert tail_large_r((0, 1)).coefficient == pytest.approx(math.pi / 2)
    assert tail_large_r((0, 1)).kind is TailKind.LOG


def test_power_tail_against_multiprecision():
    with mp.workdps(30):
        want = mp.quad(lambda y: (y**-0.5 - 1) / (1 - y * y) ** 1.5, [0, 0.5, 1])
    assert power_tail_integral(-0.5) == pytest.approx(float(want), rel=1e-10)
    t = tail_large_r((-0.5, 2))
    assert t.kind is TailKind.POWER and t.exponent == -0.5
    assert t.coefficient == pytest.approx(float(want) / 2, rel=1e-10)


def test_power_tail_fit_converges():
    t = tail_large_r((-0.5, 2))
    errs = [abs((theta_value((-0.5, 2), r) - math.pi / 2) / r**-0.5 / t.coefficient - 1) for r in (1e4, 1e6, 1e8)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.01


def test_log_tail_converges_slowly():
    # the scaled deviation approaches pi / (2q) but with an O(1 / log r) correction
    errs = []
    for r in (1e4, 1e8, 1e16, 1e32):
        got = (theta_value((0, 2), r) - math.pi / 2) * math.log(r)
        errs.append(abs(got / (math.pi / 4) - 1))
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.02


def test_tail_domain_errors():
    with pytest.raises(DomainError):
        tail_large_r((1, 3))
    with pytest.raises(DomainError):
        power_tail_integral(-1.5)


def test_expansion_example_ratio():
    a = integrand_expansion_check((0, 2), 1.0, 0.5, 1e-3)
    b = integrand_expansion_check((0, 2), 1.0, 0.5, 5e-4)
    assert abs(a / b) >= 3.5


def test_expansion_second_order_at_beta_star():
    pq = (-1.5, 2.5)
    bs = beta_star(pq)
    r1 = abs(integrand_expansion_check(pq, bs, 0.3, 2e-3))
    r2 = abs(integrand_expansion_check(pq, bs, 0.3, 1e-3))
    assert 3.5 <= r1 / r2 <= 4.5


def test_expansion_domain():
    with pytest.raises(DomainError):
        integrand_expansion_check((0, 2), 1.0, 1.0, 1e-3)
