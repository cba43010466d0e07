"""Classification over a rectangular (p, q) grid."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classify import classify_embedded
from .errors import DomainError

COLUMNS = ("p", "q", "case_path", "qualifier", "count", "xi")


@dataclass(frozen=True)
class SweepSpec:
    p_range: tuple[float, float]
    q_range: tuple[float, float]
    p_points: int
    q_points: int

    def __post_init__(self):
        for lo, hi in (self.p_range, self.q_range):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise DomainError(f"bad range [{lo}, {hi}]")
        if self.p_points < 1 or self.q_points < 1:
            raise DomainError("need at least one point per axis")
        if self.p_points == 1 and self.p_range[0] != self.p_range[1]:
            raise DomainError("a single p point needs a degenerate p range")
        if self.q_points == 1 and self.q_range[0] != self.q_range[1]:
            raise DomainError("a single q point needs a degenerate q range")

    @classmethod
    def from_step(cls, p_range, q_range, step: float) -> "SweepSpec":
        if not step > 0:
            raise DomainError("step must be positive")

        def count(lo, hi):
            # tolerate ranges that are not exact multiples of step by rounding
            return int(math.floor((hi - lo) / step + 1e-9)) + 1

        n_p, n_q = count(*p_range), count(*q_range)
        p_hi = p_range[0] + (n_p - 1) * step
        q_hi = q_range[0] + (n_q - 1) * step
        return cls((p_range[0], p_hi), (q_range[0], q_hi), n_p, n_q)

    def axis(self, which: str) -> np.ndarray:
        lo, hi = self.p_range if which == "p" else self.q_range
        n = self.p_points if which == "p" else self.q_points
        return np.linspace(lo, hi, n)


def _row(args):
    q, ps = args
    out = []
    for p in ps:
        rep = classify_embedded((p, q))
        out.append((float(p), float(q), rep.case_label, rep.qualifier.value, rep.count, rep.xi))
    return out


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[tuple]:
    """Rows (p, q, case_path, qualifier, count, xi), q-major, p ascending within a row."""
    ps = spec.axis("p").tolist()
    jobs = [(float(q), ps) for q in spec.axis("q")]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        parts = [_row(j) for j in jobs]
    return [row for part in parts for row in part]
