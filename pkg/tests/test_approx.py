import math

import numpy as np
import pytest

from dtmod import (ConfigError, InflectionSet, JacobiWeight, best_coconvex,
                   best_unconstrained, catalog_lookup, jackson_tail_check)

X = catalog_lookup("poly", [0.0, 1.0])
X2 = catalog_lookup("poly", [0.0, 0.0, 1.0])
X3 = catalog_lookup("poly", [0.0, 0.0, 0.0, 1.0])
X4 = catalog_lookup("poly", [0.0, 0.0, 0.0, 0.0, 1.0])
EXP = catalog_lookup("exp", [1.0])


def test_minimax_square_by_line():
    cand = best_unconstrained(X2, 1, p=math.inf)
    assert cand.error == pytest.approx(0.5, abs=1e-6)
    assert len(cand.alternation) >= 3


def test_minimax_identity_by_constant():
    cand = best_unconstrained(X, 0, p=math.inf)
    assert cand.error == pytest.approx(1.0, abs=1e-8)


def test_minimax_quartic_by_quadratic():
    # x^4 - (x^2 - 1/8) equioscillates with amplitude 1/8
    cand = best_unconstrained(X4, 2, p=math.inf)
    assert cand.error == pytest.approx(0.125, abs=1e-5)


def test_exact_when_degree_suffices():
    for f, n in ((X2, 2), (X3, 3), (X3, 5)):
        cand = best_unconstrained(f, n, p=math.inf)
        assert cand.error <= 1e-10


def test_l2_projection_error():
    # closed form: || x^2 - 1/3 ||_2 = sqrt(8/45)
    cand = best_unconstrained(X2, 1, p=2.0)
    assert cand.error == pytest.approx(math.sqrt(8.0 / 45.0), abs=1e-5)


def test_coefficients_evaluate():
    cand = best_unconstrained(EXP, 4, p=math.inf)
    xs = np.linspace(-1, 1, 41)
    assert np.max(np.abs(cand(xs) - np.exp(xs))) <= cand.error + 1e-9
    assert cand.error < 6e-3  # analytic target, fast decay


def test_constrained_never_beats_unconstrained():
    Y0 = InflectionSet()
    for f in (X2, X4, EXP):
        for n in (2, 3):
            e = best_unconstrained(f, n, p=math.inf).error
            ce = best_coconvex(f, n, p=math.inf, Y=Y0).error
            assert ce >= e - 1e-12


def test_coconvex_cubic_exact():
    cand = best_coconvex(X3, 3, p=math.inf, Y=InflectionSet([0.0]))
    assert cand.error <= 1e-8


def test_convex_fit_of_concave_dip():
    f = catalog_lookup("poly", [0.0, 0.0, -1.0])  # concave
    cand = best_coconvex(f, 2, p=math.inf, Y=InflectionSet())
    xs = np.linspace(-0.99, 0.99, 101)
    assert np.diff(cand(xs), 2).min() >= -1e-9
    assert cand.error > 0.1  # genuinely infeasible to match a concave target


def test_weighted_minimax():
    w = JacobiWeight(0.5, 0.5)
    cand = best_unconstrained(X2, 1, w=w, p=math.inf)
    assert 0 < cand.error < 0.5  # the weight damps the endpoint peaks


def test_jackson_tail_finite():
    rep = jackson_tail_check(EXP, 1, 2, 10)
    assert math.isfinite(rep.constant)
    plains = [e for _, e, _ in rep.rows]
    shaped = [ce for _, _, ce in rep.rows]
    assert all(a >= b - 1e-12 for a, b in zip(plains, plains[1:]))
    assert all(a >= b - 1e-12 for a, b in zip(shaped, shaped[1:]))


def test_jackson_sigma_four_gate():
    with pytest.raises(ConfigError):
        jackson_tail_check(EXP, 4, 2, 8)
    rep = jackson_tail_check(EXP, 4, 2, 8, allow_sigma_4=True)
    assert any("hypoth" in fl for fl in rep.flags)


def test_jackson_coconvex_path():
    rep = jackson_tail_check(X3, 2, 2, 8, Y=InflectionSet([0.0]))
    assert math.isfinite(rep.constant)
