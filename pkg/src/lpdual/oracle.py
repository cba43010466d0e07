"""High-precision reference values of Theta, independent of the main path.

Integrates the raw period integral over x in (1, r) with mpmath's
tanh-sinh rule, using the radicand written directly as

    ((r^p - r^q + (r^q - 1) x^p) / (r^p - 1))^(2/q) - x^2

(or its p = 0 / q = 0 forms) in multiprecision arithmetic.  Nothing here
shares code with the double-precision kernels in ``period``.
"""

from __future__ import annotations

import mpmath as mp

from .errors import DomainError


def raw_radicand(p, q, r, x):
    """I(p, q, r, x) in mpmath arithmetic at the current precision."""
    p, q, r, x = (mp.mpf(v) for v in (p, q, r, x))
    if p == 0:
        inner = 1 + (r**q - 1) * mp.log(x) / mp.log(r)
        return inner ** (2 / q) - x * x
    if q == 0:
        return mp.exp(2 * mp.log(r) * (x**p - 1) / (r**p - 1)) - x * x
    inner = (r**p - r**q + (r**q - 1) * x**p) / (r**p - 1)
    return inner ** (2 / q) - x * x


def theta_oracle(p, q, r, dps: int = 40) -> float:
    """Theta(p, q, r) by tanh-sinh quadrature on the raw integral."""
    if not p < q:
        raise DomainError(f"requires p < q, got p={p}, q={q}")
    if not r > 1:
        raise DomainError(f"requires r > 1, got r={r}")
    with mp.workdps(dps):
        rr = mp.mpf(r)
        # geometric breakpoints let the rule resolve layers at either end
        n_pieces = max(2, int(mp.ceil(mp.log(rr) / mp.log(4))) + 1)
        pts = [rr ** (mp.mpf(k) / n_pieces) for k in range(n_pieces + 1)]
        pts[0], pts[-1] = mp.mpf(1), rr

        def f(x):
            rad = raw_radicand(p, q, rr, x)
            # nodes that round onto an endpoint carry negligible weight
            return 1 / mp.sqrt(rad) if rad > 0 else mp.mpf(0)

        val = mp.quad(f, pts, method="tanh-sinh")
        return float(val)
