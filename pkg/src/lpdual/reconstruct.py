"""Support-function profiles: arc integration, assembly and planar curves.

Along a monotone arc x = u/u_- runs from 1 to r and

    dtheta = dx / sqrt(I(x)),    u_theta = u_- sqrt(I(x)),

with I the radicand of the period integral.  The arc is integrated in the
square-root variables x = 1 + s^2 (lower half) and x = r - s^2 (upper half),
which make the integrand bounded, on panels graded geometrically towards
both ends.  Second derivatives are never taken from the equation itself:
they are either known in closed form or obtained by spectral
differentiation of the sampled u_theta, so ``ode_residual`` is a genuine
check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft as sfft
from scipy.interpolate import CubicSpline

from .errors import ConvexityError, DomainError, NumericalError, ParamError, PeriodMismatchError
from .period import (
    ExponentPair,
    _log_abs_expm1,
    _log_affine,
    _ratio_parts,
    _raw_kernel,
    as_pair,
    endpoint_u_minus,
)

DEFAULT_SAMPLES = 2048

_GL_ORDER = 24
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
# panels halve the endpoint distance x - 1 (or r - x) down to 2^-96 of the
# half-range; each panel then spans at most a factor 2 in x
_GRADING_LEVELS = 96


@dataclass(frozen=True)
class SupportProfile:
    """Sampled support function.

    ``periodic`` profiles cover ``span`` with the endpoint excluded
    (thetas[0] + span closes the loop); arcs include both endpoints and have
    span == arc_theta.  ``n`` and ``m`` are the winding number and the
    number of maxima per full curve.
    """

    thetas: np.ndarray
    u: np.ndarray
    u_theta: np.ndarray
    pq: ExponentPair
    arc_theta: float
    u_thetatheta: np.ndarray | None = None
    n: int = 1
    m: int = 1
    periodic: bool = False
    span: float = field(default=float("nan"))

    def __post_init__(self):
        for name in ("thetas", "u", "u_theta"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.u_thetatheta is not None:
            object.__setattr__(self, "u_thetatheta", np.asarray(self.u_thetatheta, dtype=float))
        if not (self.thetas.shape == self.u.shape == self.u_theta.shape):
            raise ValueError("thetas, u and u_theta must have equal shapes")
        if not np.all(self.u > 0):
            raise ValueError("support values must be positive")
        if np.any(np.diff(self.thetas) <= 0):
            raise ValueError("thetas must be strictly increasing")
        if math.isnan(self.span):
            object.__setattr__(self, "span", float(self.thetas[-1] - self.thetas[0]))


@dataclass(frozen=True)
class PlanarCurve:
    points: np.ndarray
    closed: bool
    total_curvature: float
    symmetry: tuple[int, int]
    closure_gap: float = 0.0
    area: float | None = None


class Family(str, enum.Enum):
    TRANSLATE12 = "translate12"
    POLAR2M1 = "polar2m1"
    ELLIPSE2 = "ellipse2"


_FAMILY_PQ = {
    Family.TRANSLATE12: ExponentPair(1, 2),
    Family.POLAR2M1: ExponentPair(-2, -1),
    Family.ELLIPSE2: ExponentPair(-2, 2),
}


@dataclass(frozen=True)
class ClosedFormParams:
    """lam for TRANSLATE12 / ELLIPSE2, mu for POLAR2M1 (stored in ``value``)."""

    family: Family
    value: float
    theta0: float = 0.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        v = self.value
        if not math.isfinite(v) or not math.isfinite(self.theta0):
            raise ParamError("parameters must be finite")
        if fam is Family.TRANSLATE12 and not v >= 0:
            raise ParamError(f"lambda must be >= 0, got {v}")
        if fam is Family.POLAR2M1 and not 0 <= v < 1:
            raise ParamError(f"mu must lie in [0, 1), got {v}")
        if fam is Family.ELLIPSE2 and not v > 0:
            raise ParamError(f"lambda must be > 0, got {v}")
        if not 0 <= self.theta0 < 2 * math.pi:
            raise ParamError(f"theta0 must lie in [0, 2pi), got {self.theta0}")


# ---------------------------------------------------------------------------
# arc integration


def _half_kernel(pq, L, s, upper):
    """I at x = 1 + s^2 (lower) or x = r - s^2 (upper), from exact log distances."""
    s2 = s * s
    if upper:
        t = -np.log1p(-s2 * math.exp(-L))
        lx = L - t
    else:
        lx = np.log1p(s2)
        t = L - lx
    return _raw_kernel(pq.p, pq.q, L, lx, t)


def _raw_kernel_dx(p, q, L, lx, t):
    """dI/dx, differentiated analytically from the first integral."""
    R, S = _ratio_parts(p, L, lx, t)
    # log of dR/dx = p x^(p-1) / (r^p - 1), positive for every p
    if p == 0:
        log_dr = -math.log(L) - lx
    else:
        log_dr = math.log(abs(p)) - float(_log_abs_expm1(p * L)) + (p - 1) * lx
    x = np.exp(lx)
    if q == 0:
        return 2 * np.exp(math.log(2 * L) - math.log(2) + log_dr + 2 * L * R) - 2 * x
    log_inner = _log_affine(R, S, q * L)
    log_term = (2 / q - 1) * log_inner + float(_log_abs_expm1(q * L)) - math.log(abs(q)) + log_dr
    return 2 * np.exp(log_term) - 2 * x


def _half_integrand(pq, L, s, upper):
    # dtheta/ds = 2 s / sqrt(I); finite as s -> 0 since I ~ c s^2
    kern = _half_kernel(pq, L, s, upper)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2 * s / np.sqrt(kern)
    return out


def _graded_edges(s_max):
    k = np.arange(_GRADING_LEVELS, -1, -1, dtype=float)
    return np.concatenate([[0.0], s_max * np.exp2(-k / 2)])


def _panel_integrals(pq, L, a, b, upper):
    """GL integrals of the half integrand over panels [a_i, b_i] (vectorized)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    s = mid[..., None] + half[..., None] * _GL_X
    f = _half_integrand(pq, L, s, upper)
    # below 1e-140 s^2 loses its exponent range; the neglected piece is O(s)
    f = np.where(s < 1e-140, 0.0, f)
    if not np.all(np.isfinite(f)):
        raise NumericalError("non-positive radicand inside the arc; precision exhausted")
    return half * (f @ _GL_W)


@dataclass
class _Half:
    edges: np.ndarray
    cum: np.ndarray  # theta at each edge, measured from this half's endpoint

    @property
    def total(self):
        return float(self.cum[-1])


def _build_half(pq, L, s_max, upper):
    edges = _graded_edges(s_max)
    parts = _panel_integrals(pq, L, edges[:-1], edges[1:], upper)
    return _Half(edges, np.concatenate([[0.0], np.cumsum(parts)]))


def _invert_half(pq, L, half, targets, upper, iters=60):
    """s with theta_half(s) = target, by safeguarded Newton inside each panel."""
    targets = np.asarray(targets, dtype=float)
    idx = np.clip(np.searchsorted(half.cum, targets, side="right") - 1, 0, len(half.edges) - 2)
    lo = half.edges[idx].copy()
    hi = half.edges[idx + 1].copy()
    base = half.cum[idx]
    width = half.cum[idx + 1] - base
    frac = np.where(width > 0, (targets - base) / np.where(width > 0, width, 1), 0.0)
    s = lo + np.clip(frac, 0, 1) * (hi - lo)
    a0 = half.edges[idx]
    for _ in range(iters):
        g = base + _panel_integrals(pq, L, a0, s, upper) - targets
        lo = np.where(g < 0, s, lo)
        hi = np.where(g > 0, s, hi)
        d = _half_integrand(pq, L, s, upper)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.isfinite(d) & (d > 0), g / d, np.nan)
        s_new = s - step
        bad = ~np.isfinite(s_new) | (s_new <= lo) | (s_new >= hi)
        s_new = np.where(bad, 0.5 * (lo + hi), s_new)
        done = np.abs(s_new - s) <= 4e-16 * np.maximum(np.abs(s), 1e-300)
        s = s_new
        if np.all(done | (hi - lo <= 4e-16 * np.maximum(hi, 1e-300))):
            break
    return np.where(targets <= 0, 0.0, s)


def integrate_arc(pq, r: float, samples: int = DEFAULT_SAMPLES) -> SupportProfile:
    """Monotone arc from u_- (theta = 0) to u_+ = r u_-, on a uniform theta grid."""
    pq = as_pair(pq)
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    if not (r > 1 and math.isfinite(r)):
        raise DomainError(f"requires finite r > 1, got r={r}")
    if samples < 8:
        raise DomainError("need at least 8 samples")
    L = math.log(r)
    # split at the midpoint: both halves then see x within a factor 2 per panel
    s_lo = s_hi = math.sqrt(0.5 * (r - 1))
    lower = _build_half(pq, L, s_lo, upper=False)
    upper = _build_half(pq, L, s_hi, upper=True)
    total = lower.total + upper.total

    thetas = np.linspace(0.0, total, samples)
    in_lower = thetas <= lower.total
    x = np.empty(samples)
    lx = np.empty(samples)
    t = np.empty(samples)
    s_a = _invert_half(pq, L, lower, thetas[in_lower], upper=False)
    s_b = _invert_half(pq, L, upper, total - thetas[~in_lower], upper=True)
    lx[in_lower] = np.log1p(s_a * s_a)
    t[in_lower] = L - lx[in_lower]
    t[~in_lower] = -np.log1p(-s_b * s_b * math.exp(-L))
    lx[~in_lower] = L - t[~in_lower]
    x = np.exp(lx)
    kern = _raw_kernel(pq.p, pq.q, L, lx, t)
    kern[0] = kern[-1] = 0.0
    um = endpoint_u_minus(pq, r).u_minus
    u_theta = um * np.sqrt(np.maximum(kern, 0.0))
    # u_theta^2 = u_-^2 I(u/u_-)  =>  u_thetatheta = u_- I'(x) / 2
    u_tt = 0.5 * um * _raw_kernel_dx(pq.p, pq.q, L, lx, t)
    prof = SupportProfile(thetas, um * x, u_theta, pq, total, u_tt)
    res = ode_residual(prof)
    if not res < 1e-6:
        raise NumericalError(f"arc ODE residual {res:.3e} exceeds 1e-6; increase samples")
    return prof


# ---------------------------------------------------------------------------
# spectral differentiation


def _is_uniform(thetas):
    h = np.diff(thetas)
    return np.allclose(h, h[0], rtol=1e-9, atol=0)


def _arc_derivative(f, length):
    """d/dtheta of f on a uniform grid of [0, length] with f = 0 at both ends.

    f is odd about both ends, so it is a sine series of period 2*length.
    """
    N = len(f) - 1
    b = sfft.dst(f[1:-1], type=1) / N
    k = np.arange(1, N)
    c = np.zeros(N + 1)
    c[1:N] = b * k * math.pi / length
    return sfft.dct(c, type=1) / 2


def _periodic_derivative(f, span):
    n = len(f)
    fh = np.fft.rfft(f)
    k = np.fft.rfftfreq(n, d=1.0 / n)
    dh = 1j * (2 * math.pi / span) * k * fh
    if n % 2 == 0:
        dh[-1] = 0.0
    return np.fft.irfft(dh, n)


def second_derivative(profile: SupportProfile) -> np.ndarray:
    """u_thetatheta: stored values when present, else differentiate u_theta."""
    if profile.u_thetatheta is not None:
        return profile.u_thetatheta
    th = profile.thetas
    if _is_uniform(th):
        if profile.periodic:
            return _periodic_derivative(profile.u_theta, profile.span)
        ut = profile.u_theta
        scale = max(float(np.max(np.abs(ut))), 1e-300)
        if abs(ut[0]) <= 1e-12 * scale and abs(ut[-1]) <= 1e-12 * scale:
            return _arc_derivative(ut, th[-1] - th[0])
    return CubicSpline(th, profile.u_theta)(th, 1)


def ode_residual(profile: SupportProfile) -> float:
    """max |u^(1-p) (u_theta^2 + u^2)^((q-2)/2) (u_thetatheta + u) - 1| over interior samples."""
    p, q = profile.pq
    u = profile.u
    ut = profile.u_theta
    utt = second_derivative(profile)
    lhs = np.exp((1 - p) * np.log(u) + 0.5 * (q - 2) * np.log(ut * ut + u * u)) * (utt + u)
    dev = np.abs(lhs - 1)
    if not profile.periodic and len(dev) > 2:
        dev = dev[1:-1]
    return float(np.max(dev))


# ---------------------------------------------------------------------------
# assembly and curves


def assemble_closed(arc: SupportProfile, n: int, m: int) -> SupportProfile:
    """Full profile over m periods of length 2 * arc_theta, by reflection and repetition."""
    if n < 1 or m < 1 or math.gcd(n, m) != 1:
        raise PeriodMismatchError(f"need coprime positive n, m; got n={n}, m={m}")
    if arc.periodic:
        raise PeriodMismatchError("expected a monotone arc, got a periodic profile")
    target = math.pi * n / m
    if not abs(arc.arc_theta - target) < 1e-8:
        raise PeriodMismatchError(
            f"arc turning {arc.arc_theta!r} differs from pi*n/m = {target!r} by more than 1e-8"
        )
    th = arc.thetas - arc.thetas[0]
    N = len(th) - 1
    if not _is_uniform(th):
        raise PeriodMismatchError("arc must be sampled on a uniform grid")
    scale = float(np.max(arc.u))
    if abs(arc.u_theta[0]) > 1e-8 * scale or abs(arc.u_theta[-1]) > 1e-8 * scale:
        raise PeriodMismatchError("u_theta does not vanish at the arc ends; C1 gluing fails")
    utt = None if arc.u_thetatheta is None else arc.u_thetatheta
    u_per = np.concatenate([arc.u, arc.u[-2:0:-1]])
    ut_per = np.concatenate([arc.u_theta, -arc.u_theta[-2:0:-1]])
    u_full = np.tile(u_per, m)
    ut_full = np.tile(ut_per, m)
    utt_full = None if utt is None else np.tile(np.concatenate([utt, utt[-2:0:-1]]), m)
    h = arc.arc_theta / N
    thetas = np.arange(2 * N * m) * h
    return SupportProfile(
        thetas, u_full, ut_full, arc.pq, arc.arc_theta, utt_full,
        n=n, m=m, periodic=True, span=2 * N * m * h,
    )


def support_to_curve(profile: SupportProfile) -> PlanarCurve:
    """Points u e(theta) + u_theta e'(theta); periodic profiles get their closing point."""
    utt = second_derivative(profile)
    radius = profile.u + utt
    if not np.all(radius > 0):
        raise ConvexityError("u_thetatheta + u <= 0: profile is not strictly convex")
    th, u, ut = profile.thetas, profile.u, profile.u_theta
    if profile.periodic:
        th = np.append(th, th[0] + profile.span)
        u = np.append(u, u[0])
        ut = np.append(ut, ut[0])
    c, s = np.cos(th), np.sin(th)
    pts = np.column_stack([u * c - ut * s, u * s + ut * c])
    edges = np.diff(pts, axis=0)
    ang = np.arctan2(edges[:, 1], edges[:, 0])
    turn = np.diff(ang)
    turn = (turn + math.pi) % (2 * math.pi) - math.pi
    total = float(np.sum(turn))
    gap = float(np.hypot(*(pts[-1] - pts[0])))
    size = float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
    closed = bool(profile.periodic and gap < 1e-6 * size)
    area = None
    if profile.periodic:
        # closing vertex: from the last edge back to the first
        last = (ang[0] - ang[-1] + math.pi) % (2 * math.pi) - math.pi
        total += last
        area = 0.5 * float(np.mean(profile.u * radius)) * profile.span
    return PlanarCurve(pts, closed, total, (profile.n, profile.m), gap, area)


def curvature_critical_points(profile: SupportProfile) -> int:
    """Sign changes of d/dtheta of the radius of curvature over one full profile."""
    if not profile.periodic:
        raise DomainError("needs a periodic profile")
    radius = profile.u + second_derivative(profile)
    d = _periodic_derivative(radius, profile.span)
    # a circle (constant radius) has no isolated vertices; ignore roundoff
    tol = 1e-9 * float(np.max(np.abs(radius))) * (2 * math.pi / profile.span)
    sgn = np.sign(np.where(np.abs(d) <= tol, 0.0, d))
    sgn = sgn[sgn != 0]
    if len(sgn) == 0:
        return 0
    return int(np.sum(sgn != np.roll(sgn, 1)))


# ---------------------------------------------------------------------------
# closed-form families


def closed_form(params: ClosedFormParams, samples: int = 1024) -> SupportProfile:
    fam = params.family
    v = params.value
    th = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    phi = th - params.theta0
    c, s = np.cos(phi), np.sin(phi)
    if fam is Family.TRANSLATE12:
        u = 1 + v * c
        ut = -v * s
        utt = -v * c
        m, arc = 1, math.pi
    elif fam is Family.POLAR2M1:
        w = np.sqrt(1 - v * v * s * s)
        wp = -v * v * s * c / w
        wpp = -v * v * ((c * c - s * s) * w - s * c * wp) / (w * w)
        k = 1 - v * v
        u = (w - v * c) / k
        ut = (wp + v * s) / k
        utt = (wpp + v * c) / k
        m, arc = 1, math.pi
    else:
        a, b = v * v, 1 / (v * v)
        F = a * c * c + b * s * s
        u = np.sqrt(F)
        Fp = (b - a) * 2 * s * c
        Fpp = (b - a) * 2 * (c * c - s * s)
        ut = Fp / (2 * u)
        utt = (0.5 * Fpp - ut * ut) / u
        m, arc = (1, math.pi) if v == 1 else (2, math.pi / 2)
    if (fam is Family.TRANSLATE12 and v >= 1) or not np.all(u > 0):
        raise ParamError("support function must stay positive (lambda < 1 for the (1,2) family)")
    return SupportProfile(
        th, u, ut, _FAMILY_PQ[fam], arc, utt, n=1, m=m, periodic=True, span=2 * math.pi
    )


def reflect_profile(profile: SupportProfile) -> SupportProfile:
    """theta -> -theta (mirror image about the x-axis)."""
    if not profile.periodic:
        th = -profile.thetas[::-1]
        return replace(
            profile,
            thetas=th,
            u=profile.u[::-1],
            u_theta=-profile.u_theta[::-1],
            u_thetatheta=None if profile.u_thetatheta is None else profile.u_thetatheta[::-1],
            span=profile.span,
        )
    idx = (-np.arange(len(profile.u))) % len(profile.u)
    return replace(
        profile,
        u=profile.u[idx],
        u_theta=-profile.u_theta[idx],
        u_thetatheta=None if profile.u_thetatheta is None else profile.u_thetatheta[idx],
    )
