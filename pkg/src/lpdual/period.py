"""First integral and period function Theta(p, q, r).

Theta(p, q, r) is the total turning of the monotone arc of a solution of

    u^(1-p) (u'^2 + u^2)^((q-2)/2) (u'' + u) = 1

joining a minimum u_- to a maximum u_+ = r u_-.  Writing x = u/u_- it equals

    int_1^r dx / sqrt(I(p, q, r, x))

with I vanishing (like a square root) at both ends.  The main evaluation path
substitutes x^beta = ((r^beta - 1) z + r^beta + 1) / 2, pulls the Chebyshev
weight 1/sqrt(1 - z^2) out of the integrand and applies Gauss-Chebyshev
quadrature to the remaining smooth factor.

All kernels are written in terms of log x and log(r/x), both computed from
the quadrature node without cancellation, so the endpoint zeros of I keep
full relative accuracy.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DomainError

# (p, q) pairs with Theta independent of r
EXACT_FAMILIES = {
    (1.0, 2.0): math.pi,
    (-2.0, -1.0): math.pi,
    (-2.0, 2.0): math.pi / 2,
}

# exp overflows a little above 709
_EXP_SAFE = 700.0
# below this, the p = 0 (q = 0) forms are exact in double precision, while
# expm1(p log r) starts losing relative accuracy as it nears the subnormals
_ZERO_EXPONENT = 1e-100


@dataclass(frozen=True)
class ExponentPair:
    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise DomainError(f"exponents must be finite, got p={self.p}, q={self.q}")
        for name in ("p", "q"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, 0.0 if abs(v) < _ZERO_EXPONENT else v)

    @property
    def in_domain_D(self) -> bool:
        return self.p < self.q

    @property
    def is_exceptional(self) -> bool:
        return (self.p, self.q) in EXACT_FAMILIES

    def reflected(self) -> "ExponentPair":
        return ExponentPair(-self.q, -self.p)

    def __iter__(self):
        yield self.p
        yield self.q


def as_pair(pq) -> ExponentPair:
    if isinstance(pq, ExponentPair):
        return pq
    p, q = pq
    return ExponentPair(p, q)


def _default_rel_tol() -> float:
    return float(os.environ.get("LPDUAL_REL_TOL", "1e-12"))


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the Gauss-Chebyshev period evaluation.

    ``exact_special`` and ``reduce_by_duality`` exist so that verification
    code can force the pure quadrature path.
    """

    base_nodes: int = 64
    max_nodes: int = 65536
    rel_tol: float = field(default_factory=_default_rel_tol)
    near_one_switch: float = 1e-4
    exact_special: bool = True
    reduce_by_duality: bool = True

    def __post_init__(self):
        if self.base_nodes < 8:
            raise ValueError("base_nodes must be >= 8")
        if self.max_nodes < self.base_nodes:
            raise ValueError("max_nodes must be >= base_nodes")
        if not (self.rel_tol > 0 and self.near_one_switch >= 0):
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = QuadratureConfig()


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    SERIES_NEAR_ONE = "series_near_one"
    EXACT_SPECIAL = "exact_special"


@dataclass(frozen=True)
class PeriodValue:
    theta: float
    err_estimate: float
    method: Method
    nodes: int = 0
    scheme: str = ""

    def __float__(self):
        return self.theta


@dataclass(frozen=True)
class ArcEndpoints:
    u_minus: float
    u_plus: float


def _check(pq: ExponentPair, r: float) -> None:
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    if not (r > 1 and math.isfinite(r)):
        raise DomainError(f"requires finite r > 1, got r={r}")


# ---------------------------------------------------------------------------
# scalar helpers


def _log_abs_expm1(a):
    """log|e^a - 1|, safe for large |a|."""
    a = np.asarray(a, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        small = np.log(np.abs(np.expm1(np.minimum(a, _EXP_SAFE))))
        big = a + np.log1p(-np.exp(-np.abs(a)))
    return np.where(a > _EXP_SAFE, big, small)


def _expm1_ratio(a, b):
    """(e^a - 1)/(e^b - 1) for same-sign a, b with |a| <= |b|."""
    return np.exp(_log_abs_expm1(a) - _log_abs_expm1(b))


def first_integral(pq, r: float) -> float:
    """Value E of the conserved quantity on the arc with max/min ratio r."""
    pq = as_pair(pq)
    _check(pq, r)
    p, q = pq
    L = math.log(r)
    if p == 0:
        c = q * L / math.expm1(q * L)
        return c - math.log(c)
    if q == 0:
        c = p * L / math.expm1(p * L)
        return (2.0 / p) * math.log(c) - 2.0 * L / math.expm1(p * L)
    # u_-^q - (q/p) u_-^p  with  u_-^(q-p) = q (r^p - 1) / (p (r^q - 1))
    log_um = _log_u_minus(p, q, L)
    return math.exp(q * log_um) - (q / p) * math.exp(p * log_um)


def _log_u_minus(p: float, q: float, L: float) -> float:
    if p == 0:
        return (math.log(q * L) - float(_log_abs_expm1(q * L))) / q
    if q == 0:
        return (math.log(p * L) - float(_log_abs_expm1(p * L))) / p
    # q (r^p - 1) / (p (r^q - 1)) > 0 on D
    log_ratio = math.log(abs(q / p)) + float(_log_abs_expm1(p * L)) - float(_log_abs_expm1(q * L))
    return log_ratio / (q - p)


def endpoint_u_minus(pq, r: float) -> ArcEndpoints:
    """Minimum and maximum support values of the arc with ratio r."""
    pq = as_pair(pq)
    _check(pq, r)
    um = math.exp(_log_u_minus(pq.p, pq.q, math.log(r)))
    return ArcEndpoints(um, r * um)


def endpoint_residual(pq, u: float, E: float) -> float:
    """Residual of the endpoint equation (u' = 0 in the first integral)."""
    p, q = as_pair(pq)
    if p == 0:
        return u**q - q * math.log(u) - E
    if q == 0:
        return 2 * math.log(u) - (2 / p) * u**p - E
    return u**q - (q / p) * u**p - E


# ---------------------------------------------------------------------------
# kernels


def _ratio_parts(p, L, lx, t):
    """R = (x^p - 1)/(r^p - 1) and 1 - R, from lx = log x and t = log(r/x)."""
    if p == 0:
        return lx / L, t / L
    if p < 0:
        R = _expm1_ratio(p * lx, p * L)
        one_minus = np.exp(p * lx) * _expm1_ratio(p * t, p * L)
    else:
        R = np.exp(-p * t) * _expm1_ratio(-p * lx, -p * L)
        one_minus = _expm1_ratio(-p * t, -p * L)
    return R, one_minus


def _log_affine(a, b, c):
    """log(1 + a (e^c - 1)) for a in [0, 1] and b = 1 - a.

    log1p is the accurate choice unless its argument approaches -1; there the
    equivalent log(b + a e^c), a sum of positive terms, takes over.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        arg = a * math.expm1(min(c, _EXP_SAFE))
        direct = np.log1p(arg)
        summed = np.logaddexp(np.log(b), np.log(a) + c)
    if c > _EXP_SAFE:
        return summed
    return np.where(arg >= -0.5, direct, summed)


def _log_excess(p, q, L, lx, t):
    """D = log((I + x^2)/x^2), so that I = x^2 expm1(D).

    The lower form is used where x is nearer 1 and the upper one where x is
    nearer r; each is free of cancellation at its own endpoint.
    """
    lx = np.asarray(lx, dtype=float)
    t = np.asarray(t, dtype=float)
    R, S = _ratio_parts(p, L, lx, t)
    lower = lx <= t
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if q == 0:
            d_lo = 2 * L * R - 2 * lx
            d_hi = 2 * t - 2 * L * S
        else:
            qL = q * L
            d_lo = (2 / q) * _log_affine(R, S, qL) - 2 * lx
            tail = _log_affine(S, R, -qL)
            d_hi = 2 * t + (2 / q) * tail
    return np.where(lower, d_lo, d_hi)


def _raw_kernel(p, q, L, lx, t):
    """I(p, q, r, x) evaluated from lx = log x and t = log(r/x)."""
    D = _log_excess(p, q, L, lx, t)
    return np.exp(2 * np.asarray(lx, dtype=float)) * np.expm1(D)


def integrand_raw(pq, r: float, x):
    """The radicand I(p, q, r, x) of the period integral in x = u/u_-.

    Vanishes at x = 1 and x = r and is positive in between.
    """
    pq = as_pair(pq)
    if not (r > 1):
        raise DomainError(f"requires r > 1, got r={r}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 1) or np.any(xa > r):
        raise DomainError("x must lie in [1, r]")
    L = math.log(r)
    lx = np.log(xa)
    t = np.log(r / xa)
    out = _raw_kernel(pq.p, pq.q, L, lx, t)
    return float(out) if np.ndim(out) == 0 else out


def _log_v_parts(beta, L, y, y1):
    """(log x, log(r/x)) for x^beta = 1 + (r^beta - 1) y, with y1 = 1 - y."""
    bL = beta * L
    with np.errstate(divide="ignore"):
        if bL < _EXP_SAFE:
            log_v = np.log1p(np.expm1(bL) * y)
        else:
            log_v = np.logaddexp(np.log(y1), np.log(y) + bL)
        if -bL < _EXP_SAFE:
            log_v_over = np.log1p(y1 * np.expm1(-bL))
        else:
            log_v_over = np.logaddexp(np.log(y), np.log(y1) - bL)
    return log_v / beta, -log_v_over / beta


def _transformed_kernel(p, q, beta, L, y, y1):
    """I~(p, q, beta, r, z) with y = (1+z)/2 and y1 = (1-z)/2 given separately."""
    lx, t = _log_v_parts(beta, L, y, y1)
    D = _log_excess(p, q, L, lx, t)
    log_pref = math.log(4 * beta * beta) - 2 * float(_log_abs_expm1(beta * L))
    # D beyond ~709 overflows to +inf, and such nodes contribute 1/sqrt(inf) = 0
    with np.errstate(over="ignore"):
        return np.exp(log_pref + 2 * beta * lx) * np.expm1(D)


def integrand_transformed(pq, beta: float, r: float, z):
    """Radicand I~ of the period integral in the variable z in (-1, 1).

    Related to the raw radicand by I~ = 4 beta^2 / (r^beta - 1)^2 * x^(2 beta - 2) * I(x)
    where x = v^(1/beta) and v = ((r^beta - 1) z + r^beta + 1) / 2.
    """
    pq = as_pair(pq)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    if not (r > 1):
        raise DomainError(f"requires r > 1, got r={r}")
    za = np.asarray(z, dtype=float)
    if np.any(za <= -1) or np.any(za >= 1):
        raise DomainError("z must lie in the open interval (-1, 1)")
    out = _transformed_kernel(pq.p, pq.q, beta, math.log(r), (1 + za) / 2, (1 - za) / 2)
    return float(out) if np.ndim(out) == 0 else out


def beta_star(pq) -> float:
    """Substitution exponent (2q - p)/3 that kills the first-order term near r = 1."""
    p, q = as_pair(pq)
    return (2 * q - p) / 3


# ---------------------------------------------------------------------------
# Gauss-Chebyshev evaluation


def _chebyshev_nodes(n: int):
    phi = (2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n)
    # y = (1+z)/2 = cos^2(phi/2), 1 - y = sin^2(phi/2) with z = cos(phi)
    return np.cos(phi / 2) ** 2, np.sin(phi / 2) ** 2


def _gauss_chebyshev_sum(p, q, beta, L, n):
    y, y1 = _chebyshev_nodes(n)
    kern = _transformed_kernel(p, q, beta, L, y, y1)
    g = kern / (4 * y * y1)
    if not np.all(g > 0):
        bad = int(np.sum(~(g > 0)))
        raise ConvergenceError(
            f"non-positive transformed kernel at {bad} of {n} nodes "
            f"(p={p}, q={q}, r={math.exp(L)}); precision exhausted"
        )
    return math.pi / n * float(np.sum(1 / np.sqrt(g)))


def _choose_beta(p: float, q: float, L: float) -> float:
    """beta* = (2q - p)/3, shrunk so that |beta| log r <= 1.

    The integral does not depend on beta.  beta* matters only as r -> 1; for
    large beta log r the map x = v^(1/beta) piles all nodes up near x = r.
    """
    beta = (2 * q - p) / 3
    if beta == 0:
        # only reachable for q < 0 with duality reduction disabled
        beta = -1.0
    cap = 1.0 / L
    if abs(beta) > cap:
        beta = math.copysign(cap, beta)
    return beta


def _gauss_chebyshev(p, q, beta, L, cfg, n_start=None, n_stop=None):
    n = n_start or cfg.base_nodes
    n_stop = n_stop or cfg.max_nodes
    prev = _gauss_chebyshev_sum(p, q, beta, L, n)
    diff = math.inf
    while 2 * n <= n_stop:
        n *= 2
        cur = _gauss_chebyshev_sum(p, q, beta, L, n)
        diff = abs(cur - prev)
        if diff < cfg.rel_tol * abs(cur):
            return cur, diff, n
        prev = cur
    return None, diff, n


# Gauss-Chebyshev budget before trying tanh-sinh; slow algebraic convergence
# by then means endpoint behaviour that tanh-sinh handles in a few hundred nodes
_GC_HANDOFF = 4096


# tanh-sinh truncation: at |t| = 4.5 the distance to the endpoint is ~1e-60
_DE_TMAX = 4.5
_DE_MAX_LEVEL = 12


def _de_terms(p, q, beta, L, t):
    s = 0.5 * np.pi * np.sinh(t)
    y = 1 / (1 + np.exp(-2 * s))
    y1 = 1 / (1 + np.exp(2 * s))
    kern = _transformed_kernel(p, q, beta, L, y, y1)
    w = 0.5 * np.pi * np.cosh(t) * 4 * y * y1
    keep = w > 0
    out = np.zeros_like(t)
    if np.any(keep & ~(kern > 0)):
        raise ConvergenceError(
            f"non-positive transformed kernel (p={p}, q={q}, r={math.exp(L)}); precision exhausted"
        )
    out[keep] = w[keep] / np.sqrt(kern[keep])
    return out


def _double_exponential(p, q, beta, L, cfg):
    """Tanh-sinh rule in z with exact endpoint distances; halves h until converged."""
    h = 0.5
    t = np.arange(-_DE_TMAX, _DE_TMAX + h / 2, h)
    total = float(np.sum(_de_terms(p, q, beta, L, t)))
    prev = h * total
    diff = math.inf
    for level in range(1, _DE_MAX_LEVEL + 1):
        h /= 2
        t = np.arange(-_DE_TMAX + h, _DE_TMAX, 2 * h)
        total += float(np.sum(_de_terms(p, q, beta, L, t)))
        cur = h * total
        diff = abs(cur - prev)
        # the error of tanh-sinh falls roughly quadratically per level
        if level >= 3 and diff < cfg.rel_tol * abs(cur):
            return cur, diff, int(round(2 * _DE_TMAX / h)) + 1
        prev = cur
    return None, diff, int(round(2 * _DE_TMAX / h)) + 1


def theta_quadrature(pq, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG, beta=None):
    """Quadrature of the transformed period integral, no special-casing.

    Gauss-Chebyshev with node doubling first.  If it has not converged by
    4096 nodes the tanh-sinh rule is tried, and only if that fails too does
    the doubling continue up to ``cfg.max_nodes``.  Returns
    (theta, err_estimate, nodes, scheme).

    Near r = 1 the kernel is a difference of nearly equal logs and carries
    relative noise of about eps / (r - 1); the tolerance is floored there.
    """
    pq = as_pair(pq)
    _check(pq, r)
    p, q = pq
    L = math.log(r)
    floor = 8 * np.finfo(float).eps / math.expm1(L)
    if floor > cfg.rel_tol:
        cfg = replace(cfg, rel_tol=floor)
    if beta is None:
        beta = _choose_beta(p, q, L)
    handoff = min(_GC_HANDOFF, cfg.max_nodes)
    val, diff_gc, n = _gauss_chebyshev(p, q, beta, L, cfg, n_stop=handoff)
    if val is not None:
        return val, diff_gc, n, "gauss_chebyshev"
    val, diff, n_de = _double_exponential(p, q, beta, L, cfg)
    if val is not None:
        return val, diff, n_de, "double_exponential"
    if n < cfg.max_nodes:
        val, diff_gc, n = _gauss_chebyshev(p, q, beta, L, cfg, n_start=n)
        if val is not None:
            return val, diff_gc, n, "gauss_chebyshev"
    raise ConvergenceError(
        f"quadrature did not reach rel_tol={cfg.rel_tol} (p={p}, q={q}, r={r}); "
        f"last changes: Gauss-Chebyshev {diff_gc:.3e}, tanh-sinh {diff:.3e}"
    )


def theta(pq, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PeriodValue:
    """Period function Theta(p, q, r)."""
    pq = as_pair(pq)
    _check(pq, r)
    if cfg.exact_special and pq.is_exceptional:
        return PeriodValue(EXACT_FAMILIES[(pq.p, pq.q)], 0.0, Method.EXACT_SPECIAL)
    if cfg.reduce_by_duality and pq.q <= 0:
        # Theta(p, q, r) = Theta(-q, -p, r)
        pq = pq.reflected()
    if r - 1 < cfg.near_one_switch:
        from .asymptotics import series_near_one

        s = series_near_one(pq)
        d = r - 1
        # first neglected term is o(d^2); d^3 is a conservative stand-in
        return PeriodValue(s(r), abs(s.c0) * d**3, Method.SERIES_NEAR_ONE)
    val, err, n, scheme = theta_quadrature(pq, r, cfg)
    return PeriodValue(val, err, Method.QUADRATURE, n, scheme)


def theta_value(pq, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return theta(pq, r, cfg).theta


def theta_limit_r1(pq) -> float:
    """Limit of Theta as r -> 1: pi / sqrt(q - p)."""
    pq = as_pair(pq)
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    return math.pi / math.sqrt(pq.q - pq.p)


def xi(pq) -> float:
    """Piecewise bound Xi(p, q) governing the large-r limit of Theta."""
    pq = as_pair(pq)
    p, q = pq
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={p}, q={q}")
    if p >= 0:
        return 2 * (q - p) / q
    if q > 0:
        return 2.0
    return 2 * (p - q) / p


def theta_limit_rinf(pq) -> float:
    """Limit of Theta as r -> infinity, equal to pi / Xi(p, q)."""
    return math.pi / xi(pq)
