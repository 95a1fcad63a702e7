import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmod import (InflectionSet, catalog_lookup, chebyshev_partition,
                   coconvexity_check, divided_difference, is_k_monotone,
                   spline_project)
from dtmod.shape import divided_difference_reference

EXP = catalog_lookup("exp", [1.0])
X2 = catalog_lookup("poly", [0.0, 0.0, 1.0])
X3 = catalog_lookup("poly", [0.0, 0.0, 0.0, 1.0])
GRID = np.linspace(-0.999, 0.999, 257)


def test_divided_difference_of_power():
    # [x0..xk] x^k = 1 regardless of the nodes
    assert divided_difference(X3, [-0.5, 0.1, 0.4, 0.9]) == pytest.approx(
        1.0, abs=1e-9)
    assert divided_difference(X2, [-0.3, 0.0, 0.3]) == pytest.approx(
        1.0, abs=1e-10)


def test_divided_difference_kills_lower_degree():
    lin = catalog_lookup("poly", [2.0, -1.0])
    assert divided_difference(lin, [-0.4, 0.0, 0.6]) == pytest.approx(
        0.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-0.95, 0.95), min_size=3, max_size=5, unique=True))
def test_divided_difference_matches_reference(nodes):
    # keep the nodes separated so both recursions stay well conditioned
    nodes = sorted(nodes)
    if min(b - a for a, b in zip(nodes, nodes[1:])) < 0.05:
        return
    a = divided_difference(EXP, nodes)
    b = divided_difference_reference(EXP, nodes)
    assert a == pytest.approx(b, rel=1e-7, abs=1e-9)


def test_k_monotone_classifier():
    ok, _ = is_k_monotone(EXP, 2, GRID)
    assert ok
    ok, _ = is_k_monotone(EXP, 3, GRID)
    assert ok
    ok, worst = is_k_monotone(X3, 2, GRID)
    assert not ok and worst < -1e-6
    ok, _ = is_k_monotone(X3, 3, GRID)
    assert ok
    ok, _ = is_k_monotone(X2, 2, GRID)
    assert ok


def test_coconvexity_with_inflections():
    ok, _ = coconvexity_check(X3, InflectionSet([0.0]), GRID)
    assert ok
    ok, bad = coconvexity_check(X3, InflectionSet(), GRID)
    assert not ok and len(bad) > 0
    quartic = catalog_lookup("poly", [0.0, 0.0, -1.0, 0.0, 1.0])
    inv6 = 1.0 / math.sqrt(6.0)
    ok, _ = coconvexity_check(quartic, InflectionSet([inv6, -inv6]), GRID)
    assert ok


def test_spline_reproduces_cubic():
    part = chebyshev_partition(4)
    fit = spline_project(X3, part, order=4)
    xs = np.linspace(-1, 1, 101)
    assert np.max(np.abs(fit.spline(xs) - X3(xs))) < 1e-9


def test_spline_continuity_levels():
    part = chebyshev_partition(5)
    fit = spline_project(EXP, part, order=3, continuity=1)
    # value and slope must match across interior nodes
    for v in part.nodes[1:-1]:
        left = fit.spline(v - 1e-9)
        right = fit.spline(v + 1e-9)
        assert right == pytest.approx(left, abs=1e-6)
    with pytest.raises(ValueError):
        spline_project(EXP, part, order=3, continuity=2)


def test_spline_convex_constraint():
    part = chebyshev_partition(6)
    wiggly = catalog_lookup("poly", [0.0, 0.0, 1.0, 0.0, -0.2])
    # C^1 plus per-piece curvature rows gives convexity across the knots too
    fit = spline_project(wiggly, part, order=3, constraint="convex",
                         continuity=1)
    xs = np.linspace(-0.98, 0.98, 160)
    second = np.diff(fit.spline(xs), 2)
    assert second.min() > -1e-8


def test_spline_derivative_target():
    part = chebyshev_partition(5)
    fit = spline_project(EXP, part, order=4, r=1)
    xs = np.linspace(-0.9, 0.9, 60)
    # fitting the first derivative of exp still approximates exp' = exp
    assert np.max(np.abs(fit.spline(xs) - np.exp(xs))) < 5e-3
