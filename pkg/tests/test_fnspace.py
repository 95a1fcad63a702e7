import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dtmod import (ConfigError, InadmissibleWeightError, InflectionSet,
                   JacobiWeight, catalog_lookup, chebyshev_partition,
                   from_json, make_jacobi_weight, merge_partitions, mesh_norm,
                   parse_inline, phi, uniform_partition)

GRID = np.linspace(-0.98, 0.99, 101)


def test_parse_inline_poly():
    f = parse_inline("poly:1,0,2")
    assert np.allclose(f(GRID), 1 + 2 * GRID**2)
    assert f.label == "poly:1,0,2"


def test_parse_inline_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_inline("poly:1,zz")
    with pytest.raises(ConfigError):
        parse_inline("nosuchkind:1")


def test_from_json_roundtrip():
    f = from_json({"kind": "abspow", "params": [0.0, 3.5], "label": "a"})
    assert f.label == "a"
    assert np.allclose(f(GRID), np.abs(GRID) ** 3.5)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=7))
def test_poly_matches_numpy(coeffs):
    f = catalog_lookup("poly", coeffs)
    x = np.linspace(-1, 1, 31)
    assert np.allclose(f(x), np.polynomial.polynomial.polyval(x, coeffs),
                       atol=1e-9)


def test_derivatives_exact():
    f = catalog_lookup("poly", [1.0, -2.0, 0.0, 4.0])
    # d/dx (1 - 2x + 4x^3) = -2 + 12x^2
    assert np.allclose(f.derivative(1)(GRID), -2 + 12 * GRID**2)
    assert np.allclose(f.derivative(3)(GRID), 24.0)
    assert np.allclose(f.derivative(4)(GRID), 0.0)
    g = catalog_lookup("exp", [2.0])
    assert np.allclose(g.derivative(2)(GRID), 4 * np.exp(2 * GRID))


def test_smoothness_orders():
    assert catalog_lookup("poly", [0, 0, 1]).smoothness == math.inf
    assert catalog_lookup("exp", [1.0]).smoothness == math.inf
    assert catalog_lookup("abspow", [0.0, 3.5]).smoothness == 3
    assert catalog_lookup("truncpow", [0.3, 4]).smoothness == 3


def test_truncpow_one_sided():
    f = catalog_lookup("truncpow", [0.3, 4])
    assert f(0.1) == 0.0
    assert f(0.5) == pytest.approx(0.2**4, abs=1e-15)


def test_phi_endpoints():
    assert phi(0.0) == pytest.approx(1.0)
    assert phi(1.0) == 0.0
    assert phi(-1.0) == 0.0
    x = np.linspace(-1, 1, 33)
    assert np.allclose(phi(x), np.sqrt(1 - x**2))


def test_weight_admissibility():
    w = JacobiWeight(0.5, 0.0)
    assert w.admissible_for(math.inf)
    assert JacobiWeight(-0.4, 0.0).admissible_for(2.0)  # -0.4 > -1/2
    assert not JacobiWeight(-0.6, 0.0).admissible_for(2.0)
    with pytest.raises(InadmissibleWeightError):
        make_jacobi_weight(-1.0, 0.0, math.inf)
    with pytest.raises(InadmissibleWeightError):
        make_jacobi_weight(0.0, -2.0, 4.0)


def test_weight_values_and_shift():
    w = make_jacobi_weight(1.0, 2.0, 2.0)
    x = GRID
    assert np.allclose(w(x), (1 + x) * (1 - x) ** 2)
    ws = w.shifted(0.5, 0.5)
    assert ws.alpha == 1.5 and ws.beta == 2.5
    assert JacobiWeight(0.0, 0.0).is_unit


def test_chebyshev_mesh_norms():
    # largest gap sits at the middle: cos spacing, closed forms
    assert mesh_norm(chebyshev_partition(4)) == pytest.approx(
        math.sqrt(2) / 2, abs=1e-12)
    assert mesh_norm(chebyshev_partition(6)) == pytest.approx(0.5, abs=1e-12)
    nodes = chebyshev_partition(4).nodes
    assert nodes[0] == -1.0 and nodes[-1] == 1.0
    assert np.allclose(nodes, [-math.cos(j * math.pi / 4) for j in range(5)])


def test_uniform_and_merge():
    a = uniform_partition(4)
    b = chebyshev_partition(3)
    merged = merge_partitions(a, b)
    for v in list(a.nodes) + list(b.nodes):
        assert any(abs(v - u) < 1e-14 for u in merged.nodes)
    assert mesh_norm(merged) <= min(mesh_norm(a), mesh_norm(b)) + 1e-14


def test_inflection_set():
    Y = InflectionSet([0.5, -0.5])
    assert Y.s == 2
    # stored decreasing, augmented with the endpoints
    assert Y.points[0] > Y.points[1]
    assert list(Y.augmented()) == [1.0, 0.5, -0.5, -1.0]
    assert InflectionSet().s == 0
    with pytest.raises((ValueError, ConfigError)):
        InflectionSet([0.2, 0.2])
    with pytest.raises((ValueError, ConfigError)):
        InflectionSet([1.5])
