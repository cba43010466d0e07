"""Duality relations of the period function and their solution-level versions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvexityError, DomainError, NumericalError
from .period import ExponentPair, as_pair
from .reconstruct import SupportProfile, second_derivative


@dataclass(frozen=True)
class DualityTriple:
    """Theta(target) = scale * Theta(source)."""

    source: tuple[float, float, float]
    target: tuple[float, float, float]
    scale: float


def _check(pq: ExponentPair, r: float):
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    if not (r > 1 and math.isfinite(r)):
        raise DomainError(f"requires finite r > 1, got r={r}")


def dual_reflect(pq, r: float) -> DualityTriple:
    pq = as_pair(pq)
    _check(pq, r)
    # 0.0 - x keeps -0.0 out of the output
    return DualityTriple((pq.p, pq.q, r), (0.0 - pq.q, 0.0 - pq.p, r), 1.0)


def dual_p_transform(pq, r: float) -> DualityTriple:
    pq = as_pair(pq)
    _check(pq, r)
    p, q = pq
    if q <= 0:
        raise DomainError(f"p-transform needs q > 0, got q={q}")
    beta = (q - p) / q
    return DualityTriple((p, q, r), (0.0 + p * q / (p - q), q, r**beta), beta)


def dual_q_transform(pq, r: float) -> DualityTriple:
    pq = as_pair(pq)
    _check(pq, r)
    p, q = pq
    if p >= 0:
        raise DomainError(f"q-transform needs p < 0, got p={p}")
    beta = (p - q) / p
    return DualityTriple((p, q, r), (p, 0.0 + p * q / (q - p), r**beta), beta)


def _lhs(pq, u, ut, utt):
    p, q = pq
    return np.exp((1 - p) * np.log(u) + 0.5 * (q - 2) * np.log(ut * ut + u * u)) * (utt + u)


def power_transform(profile: SupportProfile, pq=None, tol: float = 1e-6) -> SupportProfile:
    """w(tau) = K u(theta)^beta with tau = beta theta and beta = (q - p)/q.

    w solves the equation for (pq/(p - q), q) after scaling by K.  The left
    side is homogeneous of degree q^2/(q - p) in w, so K is fixed by the
    (constant) value C of the left side for K = 1: K = C^(-(q - p)/q^2).
    """
    pq = as_pair(profile.pq if pq is None else pq)
    p, q = pq
    if not pq.in_domain_D or q <= 0:
        raise DomainError(f"power transform needs p < q and q > 0, got p={p}, q={q}")
    beta = (q - p) / q
    p_new = 0.0 + p * q / (p - q)
    u, ut = profile.u, profile.u_theta
    utt = second_derivative(profile)
    w = u**beta
    w_t = u ** (beta - 1) * ut
    w_tt = ((beta - 1) * u ** (beta - 2) * ut * ut + u ** (beta - 1) * utt) / beta
    lhs = _lhs((p_new, q), w, w_t, w_tt)
    C = float(np.median(lhs))
    spread = float(np.max(np.abs(lhs / C - 1)))
    if not (C > 0 and spread <= tol):
        raise NumericalError(
            f"transformed left side is not constant (relative spread {spread:.3e}); "
            "input does not solve the equation"
        )
    K = C ** (-(q - p) / q**2)
    return SupportProfile(
        beta * profile.thetas,
        K * w,
        K * w_t,
        ExponentPair(p_new, q),
        beta * profile.arc_theta,
        K * w_tt,
        n=profile.n,
        m=profile.m,
        periodic=profile.periodic,
        span=beta * profile.span,
    )


def polar_dual(profile: SupportProfile) -> SupportProfile:
    """Support function of the polar body, sampled at the dual normal angles.

    Each sample maps exactly: the curve point with normal angle theta lies
    at polar angle eta = theta + atan2(u_theta, u) and distance
    sqrt(u^2 + u_theta^2), so the polar body has support value 1/distance
    there.  No resampling is done, so the dual grid is in general not
    uniform.
    """
    u, ut = profile.u, profile.u_theta
    utt = second_derivative(profile)
    radius = utt + u
    if not np.all(radius > 0):
        raise ConvexityError("u_thetatheta + u <= 0: profile is not strictly convex")
    eta = profile.thetas + np.arctan2(ut, u)
    v = 1 / np.hypot(u, ut)
    v_e = -v * ut / u
    # curvature radii of a body and its polar multiply to (u v)^-3
    v_ee = 1 / (radius * (u * v) ** 3) - v
    p, q = profile.pq
    return SupportProfile(
        eta,
        v,
        v_e,
        ExponentPair(0.0 - q, 0.0 - p),
        profile.arc_theta,
        v_ee,
        n=profile.n,
        m=profile.m,
        periodic=profile.periodic,
        span=profile.span,
    )
