import math

import pytest

from lpdual.branches import (
    Direction,
    Region,
    admissible_m,
    enumerate_branches,
    find_root,
    monotone_class,
)
from lpdual.errors import BracketError, ExceptionalFamilyError
from lpdual.period import theta_limit_r1, theta_value


def test_monotone_examples():
    assert monotone_class((-3, 3)).direction is Direction.INCREASING
    assert monotone_class((-3, 3)).region_case is Region.I
    assert monotone_class((0, 1)).direction is Direction.DECREASING
    assert monotone_class((0, 1)).region_case is Region.IV
    assert not monotone_class((0, 5)).certain
    assert not monotone_class((1, 2)).certain


def test_admissible_examples():
    assert admissible_m((-5, 5)) == [3]
    assert admissible_m((4, 9)) == [2]
    assert admissible_m((-3, 3)) == []
    assert admissible_m((0, 5), 2) == []
    assert admissible_m((0, 5), 3) == []
    assert admissible_m((0, 5), 5) == [11]
    assert admissible_m((1, 2), 1) == []


def test_admissible_endpoints_are_strict():
    # sqrt(q - p) = 3 exactly
    assert 3 not in admissible_m((-4, 5))
    # Xi = 2 for p < 0 < q
    assert 2 not in admissible_m((-0.5, 5.5))


def test_find_root_near_one():
    pq = (-3, 3)
    target = theta_limit_r1(pq) + 1e-4
    r = find_root(pq, target, (1 + 1e-8, 10.0))
    assert abs(theta_value(pq, r) - target) < 1e-10
    assert 1 < r < 1.5


def test_find_root_rejects_constant_theta():
    with pytest.raises(BracketError):
        find_root((1, 2), 3.0, (1.5, 10.0))


def test_certified_branch():
    (br,) = enumerate_branches((-5, 5))
    assert br.m == 3 and br.certified
    assert br.r_root == pytest.approx(1.43169, rel=1e-5)
    assert br.residual < 1e-10


def test_uncertified_scan_finds_crossing():
    # Theta starts below pi/2 and returns to pi/2 from above: one crossing
    found = enumerate_branches((0, 5))
    assert [b.m for b in found] == [2]
    assert not found[0].certified
    assert abs(theta_value((0, 5), found[0].r_root) - math.pi / 2) < 1e-10


def test_no_branches():
    assert enumerate_branches((-3, 3)) == []
    assert enumerate_branches((0.5, 1)) == []
    assert enumerate_branches((3, 2)) == []


def test_exceptional_pairs_raise():
    with pytest.raises(ExceptionalFamilyError):
        enumerate_branches((-2, 2))


def test_parallel_matches_serial():
    a = enumerate_branches((0, 10))
    b = enumerate_branches((0, 10), workers=4)
    assert [(x.m, x.r_root) for x in a] == [(x.m, x.r_root) for x in b]
    assert [x.m for x in a] == [2, 3]
