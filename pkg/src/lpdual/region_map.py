"""Hand-transcribed reference map of embedded-solution counts over the (p, q) plane.

The map is a list of filled polygons in paint order; later polygons cover
earlier ones.  Each polygon carries a colour class:

    ("exact", k)     k embedded solutions
    ("at_least", k)  at least k
    ("pi_open", 1)   the constant, plus any non-constant one must be pi-periodic

Curved edges follow q = 2p/(2 - p) and q = p/(1 + p).  The three pairs with
a continuum of solutions are marked separately.  This is an independent
oracle for the classifier: none of it is derived from the decision tree.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import shapely
from shapely.geometry import Polygon

BOX = (-8.0, 8.0, -4.0, 12.0)
DOTS = ((-2.0, 2.0), (1.0, 2.0), (-2.0, -1.0))


def _curve(f, a, b, n=200):
    xs = np.linspace(a, b, n)
    return [(float(x), float(f(x))) for x in xs]


def _c1(x):
    return 2 * x / (2 - x)


def _c2(x):
    return x / (1 + x)


# plot-domain ends, printed to 2-3 decimals in the source drawing, are the
# abscissae where the curves cross the lines q - p = 3, 4, 9 and q = 12
_A3 = (33**0.5 - 3) / 2  # 1.37
_A4 = -2 + 12**0.5  # 1.46
_A9 = (-9 + 153**0.5) / 2  # 1.685
_A12 = 12 / 7  # 1.714
_B3 = (-3 - 33**0.5) / 2  # -4.37
_B4 = -2 - 12**0.5  # -5.46
_B9 = (-9 + 45**0.5) / 2  # -1.145

E1, E2, E3 = ("exact", 1), ("exact", 2), ("exact", 3)
L1, L2, L3 = ("at_least", 1), ("at_least", 2), ("at_least", 3)
PI = ("pi_open", 1)

# (class, vertex list) in paint order
_SHAPES = [
    (E1, [(-4, -4), (8, 8), (8, -4)]),
    (E1, [(-4, -4), (0, 0), (-2, -1), (-5, -4)]),
    (E1, [(1, 2), (0, 0), (8, 8), (8, 9)]),
    (E1, [(-2, -1), (1, 2), (-2, 2)]),
    (E1, [(-1, 2), (1, 2), (2, 4), (2, 5)]),
    (E1, [(2, 4), (4, 8), (2, 6)]),
    (E1, _curve(_c1, _A3, _A4) + [(2, 6), (2, 5)]),
    (E1, [(-2, 1), (-2, -1), (-4, -2), (-5, -2)]),
    (E1, [(-4, -2), (-8, -4), (-6, -2)]),
    (E1, _curve(_c1, _B4, _B3) + [(-5, -2), (-6, -2)]),
    (E1, [(-2, 2), (-7, 2), (-2, 7)]),
    (L1, _curve(_c2, -2, _B9) + [(-2, 7), (-2, 2)]),
    (L1, _curve(_c2, -8, -2) + [(-2, 2), (-7, 2)]),
    (E2, [(-2, -1), (0, 0), (1, 2)]),
    (E2, [(1, 2), (8, 9), (8, 12), (4, 8)]),
    (E2, [(2, 6), (4, 8), (6, 12), (3, 12), (2, 11)]),
    (E2, _curve(_c1, _A4, _A9) + [(2, 11), (2, 6)]),
    (E2, [(-2, -1), (-5, -4), (-8, -4)]),
    (E2, [(-6, -2), (-8, -2), (-8, -4)]),
    (E2, _curve(_c1, -8, _B4) + [(-6, -2), (-8, -2), (-8, -1.6)]),
    (E2, [(-8, 2), (-7, 2), (-2, 7), (-2, 12), (-4, 12), (-8, 8)]),
    (L2, _curve(_c1, _A4, _A9) + [(0, 9), (0, 4)]),
    (L2, _curve(_c2, -2, _B9) + [(0, 9), (0, 4)]),
    (L2, _curve(_c1, -8, _B4) + [(-4, 0), (-8, 0)]),
    (L2, _curve(_c2, -8, -2) + [(-4, 0), (-8, 0)]),
    (L2, [(-1, 8), (-1, 12), (-2, 12), (-2, 7)]),
    (L2, [(-8, 1), (-7, 2), (-8, 2)]),
    (E3, [(-8, 8), (-4, 12), (-8, 12)]),
    (E3, [(4, 8), (8, 12), (6, 12)]),
    (E3, [(2, 11), (3, 12), (2, 12)]),
    (E3, _curve(_c1, _A9, _A12) + [(2, 12), (2, 11)]),
    (L3, _curve(_c1, _A9, _A12) + [(0, 12), (0, 9)]),
    (L3, [(-1, 8), (0, 9), (0, 12), (-1, 12)]),
    (PI, _curve(_c1, _A3, _A4) + [(-2, 2), (-1, 2)]),
    (PI, _curve(_c1, _B4, _B3) + [(-2, 1), (-2, 2)]),
]


@lru_cache(maxsize=1)
def _shapes():
    out = []
    for cls, verts in _SHAPES:
        poly = Polygon(verts)
        if not poly.is_valid:
            poly = poly.buffer(0)
        shapely.prepare(poly)
        out.append((cls, poly))
    return out


_CLASSES = sorted({cls for cls, _ in _SHAPES})


def painted_indices(ps, qs):
    """Index into ``_CLASSES`` of the visible colour at each point, -1 if unpainted."""
    ps, qs = np.broadcast_arrays(np.asarray(ps, float), np.asarray(qs, float))
    idx = np.full(ps.shape, -1)
    for cls, poly in _shapes():
        idx[shapely.contains_xy(poly, ps, qs)] = _CLASSES.index(cls)
    return idx


def painted_class(p: float, q: float):
    """Colour class visible at (p, q), or None for unpainted points."""
    i = int(painted_indices(p, q))
    return None if i < 0 else _CLASSES[i]


def classes_near_many(ps, qs, eps: float = 0.02, rays: int = 36):
    """For each point, the visible classes at it and on a ring of radius eps.

    Grid points that land on a region boundary see every adjacent colour,
    which is how boundary samples are judged without fixing the map's own
    edge conventions.
    """
    ps = np.asarray(ps, float).ravel()
    qs = np.asarray(qs, float).ravel()
    ang = np.linspace(0, 2 * np.pi, rays, endpoint=False)
    dp = np.concatenate([[0.0], eps * np.cos(ang)])
    dq = np.concatenate([[0.0], eps * np.sin(ang)])
    idx = painted_indices(ps[:, None] + dp, qs[:, None] + dq)
    return [{_CLASSES[i] for i in row if i >= 0} for row in idx]


def classes_near(p: float, q: float, eps: float = 0.02, rays: int = 36):
    return classes_near_many([p], [q], eps, rays)[0]


def near_dot(p: float, q: float, radius: float = 0.1) -> bool:
    return any((p - a) ** 2 + (q - b) ** 2 <= radius * radius for a, b in DOTS)


def report_class(report):
    """Colour class implied by a classification report (None for continua)."""
    from .classify import Qualifier

    qual = report.qualifier
    if qual is Qualifier.CONTINUUM_FAMILY:
        return None
    if qual is Qualifier.EXACT_WITH_PI_PERIODIC_OPEN:
        return PI
    if qual is Qualifier.AT_LEAST:
        return ("at_least", report.count)
    return ("exact", report.count)
