import math

import numpy as np
import pytest

from lpdual.errors import ConvexityError, DomainError, ParamError, PeriodMismatchError
from lpdual.period import theta_value
from lpdual.reconstruct import (
    ClosedFormParams,
    Family,
    SupportProfile,
    assemble_closed,
    closed_form,
    curvature_critical_points,
    integrate_arc,
    ode_residual,
    reflect_profile,
    support_to_curve,
)


def test_arc_reproduces_translate_family():
    lam = 0.4
    r = (1 + lam) / (1 - lam)
    arc = integrate_arc((1, 2), r, 1025)
    # u_- = 1 - lam sits at theta = pi of 1 + lam cos(theta)
    want = 1 - lam * np.cos(arc.thetas)
    np.testing.assert_allclose(arc.u, want, atol=1e-8)
    assert arc.arc_theta == pytest.approx(math.pi, abs=1e-12)


@pytest.mark.parametrize("pq,r", [((0, 5), 1e6), ((-5, 5), 50.0), ((2.0, 2.5), 1e4), ((-0.5, 0.25), 16.4)])
def test_arc_turning_matches_theta(pq, r):
    arc = integrate_arc(pq, r, 257)
    assert arc.arc_theta == pytest.approx(theta_value(pq, r), rel=1e-11)
    assert arc.u[-1] / arc.u[0] == pytest.approx(r, rel=1e-12)
    assert ode_residual(arc) < 1e-6


def test_arc_input_checks():
    with pytest.raises(DomainError):
        integrate_arc((2, 1), 2.0)
    with pytest.raises(DomainError):
        integrate_arc((0, 1), 1.0)


def test_assembled_branch_is_three_fold():
    from lpdual.branches import enumerate_branches

    (br,) = enumerate_branches((-5, 5))
    prof = assemble_closed(integrate_arc((-5, 5), br.r_root, 1025), 1, 3)
    assert prof.span == pytest.approx(2 * math.pi, abs=1e-9)
    N = len(prof.u) // 3
    np.testing.assert_allclose(np.roll(prof.u, -N), prof.u, atol=1e-12)
    curve = support_to_curve(prof)
    assert curve.closed and abs(curve.total_curvature - 2 * math.pi) < 1e-9
    assert curvature_critical_points(prof) == 6


def test_assemble_rejects_wrong_period():
    arc = integrate_arc((-5, 5), 2.0, 129)
    with pytest.raises(PeriodMismatchError):
        assemble_closed(arc, 1, 3)
    with pytest.raises(PeriodMismatchError):
        assemble_closed(arc, 2, 4)


def test_unit_circle_curve():
    th = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    one = SupportProfile(th, np.ones(200), np.zeros(200), (0, 1), math.pi, np.zeros(200), periodic=True, span=2 * math.pi)
    c = support_to_curve(one)
    np.testing.assert_allclose(np.hypot(*c.points.T), 1.0)
    assert c.total_curvature == pytest.approx(2 * math.pi)
    assert c.area == pytest.approx(math.pi)
    assert curvature_critical_points(one) == 0


def test_ellipse_area_and_axes():
    lam = math.sqrt(2)
    prof = closed_form(ClosedFormParams(Family.ELLIPSE2, lam), 2000)
    c = support_to_curve(prof)
    assert c.area == pytest.approx(math.pi, abs=1e-8)
    x, y = c.points.T
    # shoelace on the emitted polygon converges to the same area
    shoelace = 0.5 * abs(np.dot(x[:-1], y[1:]) - np.dot(y[:-1], x[1:]))
    assert shoelace == pytest.approx(math.pi, rel=1e-5)
    assert x.max() == pytest.approx(lam) and y.max() == pytest.approx(1 / lam)


@pytest.mark.parametrize(
    "fam,v", [(Family.TRANSLATE12, 0.0), (Family.POLAR2M1, 0.0), (Family.ELLIPSE2, 1.0)]
)
def test_closed_form_constant_members(fam, v):
    np.testing.assert_allclose(closed_form(ClosedFormParams(fam, v), 64).u, 1.0, atol=1e-15)


@pytest.mark.parametrize("fam", list(Family))
@pytest.mark.parametrize("v", [0.1, 0.45, 0.9])
def test_closed_form_residual(fam, v):
    prof = closed_form(ClosedFormParams(fam, v, 1.1), 1000)
    assert ode_residual(prof) < 1e-10


def test_closed_form_params_validation():
    with pytest.raises(ParamError):
        ClosedFormParams(Family.POLAR2M1, 1.0)
    with pytest.raises(ParamError):
        ClosedFormParams(Family.ELLIPSE2, 0.0)
    with pytest.raises(ParamError):
        ClosedFormParams(Family.TRANSLATE12, 0.5, 7.0)
    with pytest.raises(ParamError):
        closed_form(ClosedFormParams(Family.TRANSLATE12, 1.0))


def test_reflection_mirrors_curve():
    prof = closed_form(ClosedFormParams(Family.ELLIPSE2, 1.6, 0.7), 256)
    a = support_to_curve(prof).points[:-1]
    b = support_to_curve(reflect_profile(prof)).points[:-1]
    mirrored = a * [1, -1]
    # same point set, traversed in the opposite order
    d = np.min(np.hypot(*(mirrored[:, None, :] - b[None, :, :]).transpose(2, 0, 1)), axis=1)
    assert d.max() < 1e-12


def test_nonconvex_profile_rejected():
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    u = 1 + 0.5 * np.cos(3 * th)
    prof = SupportProfile(th, u, -1.5 * np.sin(3 * th), (0, 1), math.pi, -4.5 * np.cos(3 * th), periodic=True, span=2 * math.pi)
    with pytest.raises(ConvexityError):
        support_to_curve(prof)


def test_spectral_second_derivative_without_stored_values():
    prof = closed_form(ClosedFormParams(Family.ELLIPSE2, 1.4), 256)
    bare = SupportProfile(prof.thetas, prof.u, prof.u_theta, prof.pq, prof.arc_theta, periodic=True, span=prof.span)
    assert ode_residual(bare) < 1e-10
