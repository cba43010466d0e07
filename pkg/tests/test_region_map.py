import numpy as np
import pytest

from lpdual.classify import ClassificationReport, Qualifier, classify_embedded
from lpdual.region_map import classes_near, classes_near_many, near_dot, painted_class, report_class


@pytest.mark.parametrize(
    "pt,cls",
    [
        ((4, 2), ("exact", 1)),
        ((-0.5, 0.1), ("exact", 2)),
        ((3, 6.5), ("exact", 1)),
        ((6, 11), ("exact", 3)),
        ((-7, 11), ("exact", 3)),
        ((-1.9, 5), ("at_least", 1)),
        ((-0.5, 6), ("at_least", 2)),
        ((-0.5, 10), ("at_least", 3)),
        ((0.5, 4.2), ("pi_open", 1)),
        ((-3, 0.8), ("pi_open", 1)),
    ],
)
def test_painted_interior_points(pt, cls):
    assert painted_class(*pt) == cls


def test_dots():
    assert near_dot(1, 2) and near_dot(-2, 2) and near_dot(-2, -1)
    assert not near_dot(0, 0)


def test_boundary_point_sees_both_sides():
    # q - p = 4 between the yellow and the shaded red region
    assert classes_near(0.5, 4.5) == {("pi_open", 1), ("at_least", 2)}


def test_batch_matches_single():
    ps, qs = np.array([0.5, 3.0, -6.0]), np.array([4.5, 7.0, 10.0])
    assert classes_near_many(ps, qs) == [classes_near(p, q) for p, q in zip(ps, qs)]


def _mismatches(classifier):
    P, Q = np.meshgrid(np.arange(-8, 8.001, 0.25), np.arange(-4, 12.001, 0.25))
    near = classes_near_many(P, Q)
    bad = 0
    for p, q, seen in zip(P.ravel(), Q.ravel(), near):
        c = report_class(classifier((p, q)))
        if c is not None and c not in seen:
            bad += 1
    return bad


def test_classifier_agrees_with_map():
    assert _mismatches(classify_embedded) == 0


def test_map_detects_a_swapped_subcase():
    # an injected error: Subcases 4 and 5 of Case (4) trade their counts
    def broken(pq):
        rep = classify_embedded(pq)
        if rep.case_label in ("Case(4)/Subcase 4°", "Case(4)/Subcase 5°"):
            delta = 1 if rep.case_label.endswith("4°") else -1
            return ClassificationReport(rep.p, rep.q, rep.case_path, rep.qualifier, rep.count + delta)
        return rep

    assert _mismatches(broken) > 10


def test_map_detects_lost_qualifier():
    def broken(pq):
        rep = classify_embedded(pq)
        if rep.qualifier is Qualifier.AT_LEAST:
            return ClassificationReport(rep.p, rep.q, rep.case_path, Qualifier.EXACT, rep.count)
        return rep

    assert _mismatches(broken) > 10
