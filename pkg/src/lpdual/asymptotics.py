"""Asymptotic expansions of Theta near r = 1 and r = infinity."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError
from .period import as_pair, beta_star, integrand_transformed


@dataclass(frozen=True)
class NearOneSeries:
    """Theta(p, q, r) ~ c0 + c2 (r - 1)^2 as r -> 1."""

    c0: float
    c2: float

    def __call__(self, r):
        return self.c0 + self.c2 * (r - 1) ** 2


def phi_discriminant(pq) -> float:
    """p^2 - pq + q^2 + 3p - 3q; its sign fixes the direction of Theta near r = 1."""
    p, q = as_pair(pq)
    return p * p - p * q + q * q + 3 * p - 3 * q


def series_near_one(pq) -> NearOneSeries:
    pq = as_pair(pq)
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    s = math.sqrt(pq.q - pq.p)
    return NearOneSeries(math.pi / s, math.pi * phi_discriminant(pq) / (96 * s))


class TailKind(str, enum.Enum):
    LOG = "log"
    POWER = "power"


@dataclass(frozen=True)
class LargeRTail:
    """Theta ~ constant + coefficient * g(r) as r -> infinity.

    g(r) = 1/log r for the log tail and r**exponent for the power tail.
    """

    kind: TailKind
    constant: float
    coefficient: float
    exponent: float | None = None

    def __call__(self, r):
        if self.kind is TailKind.LOG:
            return self.constant + self.coefficient / np.log(r)
        return self.constant + self.coefficient * np.power(r, self.exponent)


def power_tail_integral(p: float) -> float:
    """int_0^1 (y^p - 1) / (1 - y^2)^(3/2) dy for -1 < p < 0.

    With y = 1 - s^2 the integrand becomes
    2 (y^p - 1) / (s^2 (2 - s^2)^(3/2)), bounded at s = 0.
    """
    if not (-1 < p < 0):
        raise DomainError(f"power tail integral needs -1 < p < 0, got p={p}")

    def f(s):
        s2 = s * s
        num = math.expm1(p * math.log1p(-s2))
        return 2 * num / (s2 * (2 - s2) ** 1.5)

    # (1 - s)^p singularity at s = 1 is integrable; QAGS extrapolates through it
    val, _ = integrate.quad(f, 0.0, 1.0, limit=200, epsabs=1e-14, epsrel=1e-12)
    return val


def tail_large_r(pq) -> LargeRTail:
    pq = as_pair(pq)
    p, q = pq
    if p == 0 and q > 0:
        return LargeRTail(TailKind.LOG, math.pi / 2, math.pi / (2 * q))
    if -1 < p < 0 and q > -p:
        return LargeRTail(TailKind.POWER, math.pi / 2, power_tail_integral(p) / q, p)
    raise DomainError(
        f"large-r tail known only for p = 0 < q or -1 < p < 0 < -p < q, got p={p}, q={q}"
    )


def integrand_expansion_check(pq, beta: float, z: float, delta: float) -> float:
    """Residual of the first-order expansion of I~ at r = 1 + delta.

    Expected to be O(delta^2).
    """
    pq = as_pair(pq)
    if not pq.in_domain_D:
        raise DomainError(f"requires p < q, got p={pq.p}, q={pq.q}")
    if not (abs(z) < 1 and delta > 0):
        raise DomainError("need |z| < 1 and delta > 0")
    p, q = pq
    exact = integrand_transformed(pq, beta, 1 + delta, z)
    approx = (q - p) * (1 - z * z) * (1 + 0.5 * z * (beta - beta_star(pq)) * delta)
    return exact - approx
