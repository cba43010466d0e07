"""Decision trees for embedded and immersed solutions, and the q - p = 3 comparison bounds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DiscrepancyError, DomainError, PreconditionError
from .period import DEFAULT_CONFIG, QuadratureConfig, as_pair, integrand_raw, xi

__all__ = [
    "Qualifier",
    "ClassificationReport",
    "ImmersedVerdict",
    "Lemma74Verdict",
    "k_bucket",
    "classify_embedded",
    "classify_immersed",
    "lemma74_bound_check",
    "crosscheck_counts",
    "xi",
]

LEMMA74_P_MAX = (math.sqrt(33) - 3) / 2


class Qualifier(str, enum.Enum):
    EXACT = "exact"
    AT_LEAST = "at_least"
    UNIQUE_UP_TO_SCALING = "unique_up_to_scaling"
    CONTINUUM_FAMILY = "continuum_family"
    EXACT_WITH_PI_PERIODIC_OPEN = "exact_with_pi_periodic_open"


_FAMILY_TEXT = {
    (1.0, 2.0): "u = 1 + lambda cos(theta - theta0), 0 <= lambda < 1",
    (-2.0, -1.0): "u = (sqrt(1 - mu^2 sin^2(theta - theta0)) - mu cos(theta - theta0)) / (1 - mu^2)",
    (-2.0, 2.0): "u = sqrt(lambda^2 cos^2(theta - theta0) + lambda^-2 sin^2(theta - theta0))",
}


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict on the embedded solutions of one (p, q).

    ``count`` includes the constant solution; it is None for the continuum
    families.  ``admissible_k`` lists the symmetries k strictly between
    sqrt(q - p) and Xi.
    """

    p: float
    q: float
    case_path: tuple[str, ...]
    qualifier: Qualifier
    count: int | None
    admissible_k: list[int] = field(default_factory=list)
    xi: float | None = None
    k_bucket: int | None = None
    family: str | None = None

    @property
    def case_label(self) -> str:
        return "/".join(self.case_path)

    def summary(self) -> str:
        ks = "{" + ",".join(str(k) for k in self.admissible_k) + "}"
        if self.qualifier is Qualifier.CONTINUUM_FAMILY:
            return f"{self.case_label}, continuum family {self.family}"
        if self.qualifier is Qualifier.UNIQUE_UP_TO_SCALING:
            return f"{self.case_label}, unique up to scaling"
        if self.qualifier is Qualifier.EXACT_WITH_PI_PERIODIC_OPEN:
            return f"{self.case_label}, constant plus possibly one pi-periodic solution, k∈{ks}"
        if self.qualifier is Qualifier.EXACT and self.count == 1:
            return f"{self.case_label}, unique, k∈{ks}"
        word = "exactly" if self.qualifier is Qualifier.EXACT else "at least"
        return f"{self.case_label}, {word} {self.count}, k∈{ks}"

    def to_dict(self):
        return {
            "p": self.p,
            "q": self.q,
            "case_path": self.case_label,
            "qualifier": self.qualifier.value,
            "count": self.count,
            "admissible_k": list(self.admissible_k),
            "xi": self.xi,
            "k_bucket": self.k_bucket,
        }


def k_bucket(d: float) -> int:
    """The integer k >= 1 with (k - 1)^2 < d <= k^2, for d > 0."""
    if not d > 0:
        raise DomainError(f"need q - p > 0, got {d}")
    k = max(1, math.ceil(math.sqrt(d)))
    while (k - 1) ** 2 >= d:
        k -= 1
    while k * k < d:
        k += 1
    return k


def _admissible_k(p, q):
    from .branches import admissible_m

    return admissible_m((p, q), 1)


def _sub(n):
    return f"Subcase {n}°"


def classify_embedded(pq) -> ClassificationReport:
    """Walk the embedded-solution case tree for any finite (p, q)."""
    # same normalization as the numerics (tiny exponents read as 0)
    p, q = as_pair(pq)
    d = q - p

    def report(path, qual, count, family=None):
        if d <= 0:
            return ClassificationReport(p, q, path, qual, count)
        return ClassificationReport(
            p, q, path, qual, count, _admissible_k(p, q), xi((p, q)), k_bucket(d), family
        )

    exact, at_least = Qualifier.EXACT, Qualifier.AT_LEAST
    if d <= 0:
        c = "Case(1)"
        if q < p:
            return report((c, _sub(1)), exact, 1)
        return report((c, _sub(2)), Qualifier.UNIQUE_UP_TO_SCALING, 1)

    if d <= 1:
        c = "Case(2)"
        if (p, q) == (1.0, 2.0):
            return report((c, _sub(1)), Qualifier.CONTINUUM_FAMILY, None, _FAMILY_TEXT[(p, q)])
        if (p, q) == (-2.0, -1.0):
            return report((c, _sub(2)), Qualifier.CONTINUUM_FAMILY, None, _FAMILY_TEXT[(p, q)])
        if d == 1:
            return report((c, _sub(3)), exact, 1)
        if q <= 2 * p:
            return report((c, _sub(4)), exact, 1)
        if 2 * q <= p:
            return report((c, _sub(5)), exact, 1)
        return report((c, _sub(6)), exact, 2)

    if d <= 4:
        c = "Case(3)"
        if (p, q) == (-2.0, 2.0):
            return report((c, _sub(1)), Qualifier.CONTINUUM_FAMILY, None, _FAMILY_TEXT[(p, q)])
        if q >= 2 * p and 2 * q >= p:
            if d <= 3:
                return report((c, _sub(2)), exact, 1)
            s3 = _sub(3)
            if p >= -2 and q <= 2:
                return report((c, s3, _sub(3.1)), exact, 1)
            if q > 2:
                if p >= 2 * q / (2 + q):
                    return report((c, s3, _sub(3.2)), exact, 1)
                return report((c, s3, _sub(3.3)), Qualifier.EXACT_WITH_PI_PERIODIC_OPEN, 1)
            # here q <= 2 and p < -2
            if q <= 2 * p / (2 - p):
                return report((c, s3, _sub(3.4)), exact, 1)
            return report((c, s3, _sub(3.5)), Qualifier.EXACT_WITH_PI_PERIODIC_OPEN, 1)
        if 2 * q < p:
            return report((c, _sub(4)), exact, 2)
        return report((c, _sub(5)), exact, 2)

    c = "Case(4)"
    k = k_bucket(d)
    if q >= 2:
        if p <= -2:
            return report((c, _sub(1)), exact, k - 2)
        if p < 2 * q / (2 + q):
            if p <= -1:
                if p > q / (1 - q) and k == 3:
                    return report((c, _sub(2), _sub(2.1)), at_least, 2)
                return report((c, _sub(2)), at_least, k - 2)
            return report((c, _sub(3)), at_least, k - 1)
        if q >= 2 * p:
            return report((c, _sub(4)), exact, k - 1)
        return report((c, _sub(5)), exact, k)
    # q < 2 with q - p > 4 forces p < -2
    if q > 2 * p / (2 - p):
        if q >= 1:
            if q < p / (1 + p) and k == 3:
                return report((c, _sub(6), _sub(6.1)), at_least, 2)
            return report((c, _sub(6)), at_least, k - 2)
        return report((c, _sub(7)), at_least, k - 1)
    if 2 * q >= p:
        return report((c, _sub(8)), exact, k - 1)
    return report((c, _sub(9)), exact, k)


# ---------------------------------------------------------------------------
# immersed solutions


class ImmersedKind(str, enum.Enum):
    CONSTANTS_ONLY = "constants_only"
    CONTINUUM_FAMILY = "continuum_family"
    ADMISSIBLE = "admissible"
    NOT_ADMISSIBLE = "not_admissible"


@dataclass(frozen=True)
class ImmersedVerdict:
    kind: ImmersedKind
    unique: bool | None = None
    regime: str | None = None
    family: str | None = None

    @property
    def exists(self) -> bool:
        return self.kind is ImmersedKind.ADMISSIBLE


def immersed_regime(pq) -> str | None:
    """Which of the four uniqueness regimes (i)-(iv) contains (p, q), if any."""
    p, q = as_pair(pq)
    if p <= -2 and q >= 2:
        return "i"
    if p <= -2 and q <= 2 * p / (2 - p):
        return "ii"
    if q >= 2 and p >= 2 * q / (2 + q):
        return "iii"
    if p >= -2 and q <= 2 and q >= 2 * p / (2 - p):
        return "iv"
    return None


def classify_immersed(pq, m: int, n: int) -> ImmersedVerdict:
    """Existence (and uniqueness where known) of the solution with m maxima and winding n."""
    from .branches import admissible_m

    pq = as_pair(pq)
    if m < 1 or n < 1 or math.gcd(m, n) != 1:
        raise DomainError(f"m and n must be coprime positive integers, got m={m}, n={n}")
    if pq.p >= pq.q:
        return ImmersedVerdict(ImmersedKind.CONSTANTS_ONLY)
    if pq.is_exceptional:
        return ImmersedVerdict(ImmersedKind.CONTINUUM_FAMILY, family=_FAMILY_TEXT[(pq.p, pq.q)])
    if m not in admissible_m(pq, n):
        return ImmersedVerdict(ImmersedKind.NOT_ADMISSIBLE)
    regime = immersed_regime(pq)
    return ImmersedVerdict(ImmersedKind.ADMISSIBLE, unique=True if regime else None, regime=regime)


# ---------------------------------------------------------------------------
# comparison bounds for q - p = 3


@dataclass(frozen=True)
class Lemma74Verdict:
    first_condition: bool  # p (r^q - 1) / (q (r^p - 1)) <= r^2
    kernel: str  # "J1" or "J2"
    radicand: float
    bound: float
    holds: bool


def comparison_j1(r, x):
    return r * r + 1 - r * r / (x * x) - x * x


def comparison_j2(r, x):
    return r * r - 2 * r + 2 * x - x * x


def lemma74_ratio(p: float, r: float) -> float:
    q = p + 3
    if p == 0:
        return math.expm1(q * math.log(r)) / (q * math.log(r))
    return p * math.expm1(q * math.log(r)) / (q * math.expm1(p * math.log(r)))


def lemma74_bound_check(p: float, r: float, x: float) -> Lemma74Verdict:
    """Strict comparison of the radicand with J1 or J2 (chosen by the ratio test)."""
    q = p + 3
    if not (-1 < p < LEMMA74_P_MAX):
        raise PreconditionError(f"need -1 < p < (sqrt(33) - 3)/2, got p={p}")
    if not q > 2 * p / (2 - p):
        raise PreconditionError("need q > 2p/(2 - p)")
    if not (r > 1 and 1 < x < r):
        raise PreconditionError(f"need 1 < x < r, got r={r}, x={x}")
    first = lemma74_ratio(p, r) <= r * r
    rad = integrand_raw((p, q), r, x)
    if first:
        bound, name = comparison_j1(r, x), "J1"
    else:
        bound, name = comparison_j2(r, x), "J2"
    return Lemma74Verdict(first, name, rad, bound, rad < bound)


# ---------------------------------------------------------------------------
# cross-check against branch enumeration


@dataclass(frozen=True)
class CrosscheckReport:
    classification: ClassificationReport
    branches: list
    expected: int
    found: int

    @property
    def passed(self) -> bool:
        return self.expected == self.found


def crosscheck_counts(pq, cfg: QuadratureConfig = DEFAULT_CONFIG) -> CrosscheckReport:
    """Exact counts must equal 1 (constant) + number of enumerated branches."""
    from .branches import enumerate_branches

    rep = classify_embedded(pq)
    if rep.qualifier not in (Qualifier.EXACT, Qualifier.UNIQUE_UP_TO_SCALING):
        raise PreconditionError(f"crosscheck needs an exact verdict, got {rep.qualifier.value}")
    pq = as_pair(pq) if rep.p < rep.q else None
    branches = enumerate_branches(pq, 1, cfg) if pq is not None else []
    out = CrosscheckReport(rep, branches, rep.count, 1 + len(branches))
    if not out.passed:
        raise DiscrepancyError(
            f"{rep.case_label}: theorem count {rep.count}, enumeration found "
            f"1 + {len(branches)} at (p, q) = ({rep.p}, {rep.q})",
            out,
        )
    return out
