"""Roots of Theta(p, q, r) = pi n / m and their certification."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ConvergenceError, ExceptionalFamilyError
from .period import (
    DEFAULT_CONFIG,
    ExponentPair,
    QuadratureConfig,
    as_pair,
    theta_limit_r1,
    theta_limit_rinf,
    theta_value,
    xi,
)

ROOT_TOL = 1e-10
DEFAULT_R_MAX = 1e6
DEFAULT_GRID = 512


class Direction(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    UNKNOWN = "unknown"


class Region(str, enum.Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"


@dataclass(frozen=True)
class MonotoneVerdict:
    direction: Direction
    region_case: Region | None

    @property
    def certain(self) -> bool:
        return self.direction is not Direction.UNKNOWN


@dataclass(frozen=True)
class SolutionBranch:
    pq: ExponentPair
    n: int
    m: int
    r_root: float
    theta_target: float
    residual: float
    certified: bool
    note: str = ""

    def to_dict(self):
        return {
            "p": self.pq.p,
            "q": self.pq.q,
            "n": self.n,
            "m": self.m,
            "r_root": self.r_root,
            "theta_target": self.theta_target,
            "residual": self.residual,
            "certified": self.certified,
            "note": self.note,
        }


def monotone_class(pq) -> MonotoneVerdict:
    """Regions where Theta is known to be monotone in r."""
    pq = as_pair(pq)
    p, q = pq
    if pq.in_domain_D and not pq.is_exceptional:
        if p <= -2 and q >= 2:
            return MonotoneVerdict(Direction.INCREASING, Region.I)
        if q >= 2 and p >= 2 * q / (2 + q):
            return MonotoneVerdict(Direction.INCREASING, Region.II)
        if p <= -2 and q <= 2 * p / (2 - p):
            return MonotoneVerdict(Direction.INCREASING, Region.III)
        if p >= -2 and q <= 2 and q >= 2 * p / (2 - p):
            return MonotoneVerdict(Direction.DECREASING, Region.IV)
    return MonotoneVerdict(Direction.UNKNOWN, None)


def admissible_m(pq, n: int = 1) -> list[int]:
    """m coprime to n with m/n strictly between sqrt(q - p) and Xi(p, q).

    The three constant-period pairs have no isolated branches; they return [].
    """
    pq = as_pair(pq)
    if not pq.in_domain_D or pq.is_exceptional:
        return []
    if n < 1:
        raise ValueError("n must be a positive integer")
    d = pq.q - pq.p
    x = xi(pq)
    lo_m = math.floor(n * min(math.sqrt(d), x))
    hi_m = math.ceil(n * max(math.sqrt(d), x))
    out = []
    for m in range(max(lo_m, 1), hi_m + 1):
        if math.gcd(m, n) != 1:
            continue
        # sqrt(q - p) compared through squares to keep integer boundaries exact
        a = (m * m > n * n * d) - (m * m < n * n * d)
        b = (m > n * x) - (m < n * x)
        if a * b < 0:
            out.append(m)
    return out


def _residual(pq, r, target, cfg):
    return theta_value(pq, r, cfg) - target


def find_root(pq, theta_target: float, bracket, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """r in the bracket with |Theta(p, q, r) - theta_target| < 1e-10."""
    pq = as_pair(pq)
    r_lo, r_hi = bracket
    f_lo = _residual(pq, r_lo, theta_target, cfg)
    f_hi = _residual(pq, r_hi, theta_target, cfg)
    if f_lo == 0:
        return float(r_lo)
    if f_hi == 0:
        return float(r_hi)
    if not (f_lo < 0 < f_hi or f_hi < 0 < f_lo):
        raise BracketError(
            f"Theta - target has no sign change on [{r_lo}, {r_hi}] "
            f"(values {f_lo:.3e}, {f_hi:.3e})"
        )
    # bracketing in log(r - 1) resolves roots very close to r = 1
    g = lambda s: _residual(pq, 1 + math.exp(s), theta_target, cfg)  # noqa: E731
    s = brentq(g, math.log(r_lo - 1), math.log(r_hi - 1), xtol=1e-14, rtol=1e-15, maxiter=300)
    r = 1 + math.exp(s)
    res = abs(_residual(pq, r, theta_target, cfg))
    if not res < ROOT_TOL:
        raise ConvergenceError(f"root residual {res:.3e} above {ROOT_TOL} at r={r!r}")
    return r


def _bracket_near_one(pq, target, cfg, r_first):
    """r in (1, r_first) where Theta is on the r -> 1 side of target."""
    side = theta_limit_r1(pq) - target
    for k in range(1, 13):
        r = 1 + (r_first - 1) * 10.0**-k
        if (theta_value(pq, r, cfg) - target) * side > 0:
            return r
    return None


def _bracket_far(pq, target, cfg, r_start):
    side = theta_limit_rinf(pq) - target
    r = r_start
    while r < 1e300:
        if (theta_value(pq, r, cfg) - target) * side > 0:
            return r
        r *= 100.0
    return None


def _certified_root(pq, n, m, cfg, verdict):
    target = math.pi * n / m
    lo = _bracket_near_one(pq, target, cfg, 2.0)
    hi = _bracket_far(pq, target, cfg, 2.0)
    if lo is None or hi is None:
        raise ConvergenceError(f"could not bracket Theta = pi*{n}/{m} for {tuple(pq)}")
    r = find_root(pq, target, (lo, hi), cfg)
    res = abs(theta_value(pq, r, cfg) - target)
    return SolutionBranch(pq, n, m, r, target, res, True, f"monotone region {verdict.region_case.value}")


def _scan_grid(pq, cfg, r_max, points):
    rs = np.logspace(0, math.log10(r_max), points + 1)[1:]
    vals = np.array([theta_value(pq, r, cfg) for r in rs])
    return rs, vals


def _scan_roots(pq, n, m, cfg, rs, vals):
    target = math.pi * n / m
    out = []
    f = vals - target
    # virtual first sample at r = 1 carries the limit value
    f0 = theta_limit_r1(pq) - target
    if f0 * f[0] < 0:
        lo = _bracket_near_one(pq, target, cfg, rs[0])
        if lo is not None:
            out.append(find_root(pq, target, (lo, rs[0]), cfg))
    for i in range(len(rs) - 1):
        if f[i] == 0:
            out.append(float(rs[i]))
        elif f[i] * f[i + 1] < 0:
            out.append(find_root(pq, target, (rs[i], rs[i + 1]), cfg))
    if len(f) and f[-1] == 0:
        out.append(float(rs[-1]))
    branches = []
    for r in out:
        res = abs(theta_value(pq, r, cfg) - target)
        branches.append(SolutionBranch(pq, n, m, r, target, res, False, "grid scan"))
    return branches


def enumerate_branches(
    pq,
    n: int = 1,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    r_max: float = DEFAULT_R_MAX,
    grid: int = DEFAULT_GRID,
    workers: int | None = None,
) -> list[SolutionBranch]:
    """All located solutions of Theta(p, q, r) = pi n / m, sorted by (m, r).

    Inside the monotone regions each admissible m has exactly one root and
    the result is certified.  Elsewhere Theta is sampled on a log grid over
    (1, r_max]; every m (coprime to n) whose target lies in the sampled range
    of Theta is scanned, which also catches crossings produced by overshoot
    beyond the two limits.  Those results are not certified.
    """
    pq = as_pair(pq)
    if pq.is_exceptional:
        raise ExceptionalFamilyError(
            f"(p, q) = {tuple(pq)} has constant Theta and a continuum of solutions"
        )
    if not pq.in_domain_D:
        return []
    verdict = monotone_class(pq)
    ms = admissible_m(pq, n)
    if verdict.certain:
        jobs = [lambda m=m: [_certified_root(pq, n, m, cfg, verdict)] for m in ms]
    else:
        rs, vals = _scan_grid(pq, cfg, r_max, grid)
        lo = min(vals.min(), theta_limit_r1(pq))
        hi = max(vals.max(), theta_limit_r1(pq))
        cand = set(ms)
        # pi n / m in [lo, hi]  <=>  pi n / hi <= m <= pi n / lo
        for m in range(max(1, math.ceil(math.pi * n / hi)), math.floor(math.pi * n / lo) + 1):
            if math.gcd(m, n) == 1:
                cand.add(m)
        jobs = [lambda m=m: _scan_roots(pq, n, m, cfg, rs, vals) for m in sorted(cand)]
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda j: j(), jobs))
    else:
        parts = [j() for j in jobs]
    found = [b for part in parts for b in part]
    return sorted(found, key=lambda b: (b.m, b.r_root))
