import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmod import (HypothesisViolationError, JacobiWeight, ModulusQuery,
                   catalog_lookup, evaluate_modulus, modulus_limit_scan)
from dtmod.errors import SmoothnessError
from dtmod.moduli import (cutoff_weight, delta_factor, delta_factor_branch,
                          difference_via_iterated_integral,
                          phi_step_difference, symmetric_difference)

X2 = catalog_lookup("poly", [0.0, 0.0, 1.0])
X3 = catalog_lookup("poly", [0.0, 0.0, 0.0, 1.0])
EXP = catalog_lookup("exp", [1.0])


def test_difference_kills_low_degree():
    x = np.linspace(-0.7, 0.7, 25)
    lin = catalog_lookup("poly", [3.0, -2.0])
    assert np.max(np.abs(symmetric_difference(lin, 2, 0.1, x))) < 1e-13
    assert np.max(np.abs(symmetric_difference(X2, 3, 0.1, x))) < 1e-12


def test_difference_leading_term():
    # the k-th difference of x^k is the constant k! h^k
    for k, f in ((1, catalog_lookup("poly", [0.0, 1.0])), (2, X2), (3, X3)):
        got = symmetric_difference(f, k, 0.2, np.array([0.0, 0.3]))
        want = math.factorial(k) * 0.2**k
        assert np.allclose(got, want, atol=1e-12)


def test_phi_step_matches_plain_at_origin():
    # phi(0) = 1, so the position-scaled step equals the plain one there
    a = phi_step_difference(EXP, 2, 0.05, np.array([0.0]))
    b = symmetric_difference(EXP, 2, 0.05, np.array([0.0]))
    assert a[0] == pytest.approx(b[0], rel=1e-12)


def test_phi_step_cutoff_outside():
    # near the right endpoint the scaled window escapes [-1, 1] -> 0
    v = phi_step_difference(EXP, 2, 1.0, np.array([0.999]))
    assert v[0] == 0.0


def test_closed_form_second_modulus():
    for t in (0.1, 0.25, 0.5):
        q = ModulusQuery(variant="classical", k=2, t=t, p=math.inf)
        assert evaluate_modulus(q, X2) == pytest.approx(2 * t * t, abs=1e-9)


def test_closed_form_first_modulus():
    f = catalog_lookup("poly", [0.0, 1.0])
    for t in (0.1, 0.3):
        q = ModulusQuery(variant="classical", k=1, t=t, p=math.inf)
        assert evaluate_modulus(q, f) == pytest.approx(t, abs=1e-9)


@pytest.mark.parametrize("variant", ["classical", "dt", "main_part",
                                     "restricted", "weighted_dt"])
def test_annihilation(variant):
    r = 1 if variant == "weighted_dt" else 0
    k = 2
    # degree must fall below k + r (the engine differentiates by r first)
    f = catalog_lookup("poly", [1.0, -3.0] + ([0.5] if r else []))
    w = JacobiWeight(0.5, 0.5) if variant == "weighted_dt" else None
    q = ModulusQuery(variant=variant, k=k, t=0.3, r=r, p=2.0, weight=w)
    assert evaluate_modulus(q, f) <= 1e-10


def test_step_bound_enforced():
    with pytest.raises(HypothesisViolationError):
        ModulusQuery(variant="classical", k=3, t=0.8)
    # weighted variant is strict at 2/k
    with pytest.raises(HypothesisViolationError):
        ModulusQuery(variant="weighted_dt", k=2, t=1.0, r=1)
    ModulusQuery(variant="classical", k=2, t=1.0)  # boundary ok unweighted


def test_restricted_domain_nonempty():
    q = ModulusQuery(variant="restricted", k=1, t=0.9, A=2.0)
    with pytest.raises(HypothesisViolationError):
        evaluate_modulus(q, X2)


def test_smoothness_gate():
    rough = catalog_lookup("abspow", [0.0, 1.5])  # smoothness 1
    q = ModulusQuery(variant="weighted_dt", k=2, t=0.2, r=1)
    with pytest.raises(SmoothnessError):
        evaluate_modulus(q, rough)


def test_variant_aliases():
    q = ModulusQuery(variant="psi", k=2, t=0.2)
    assert q.variant == "main_part"
    q = ModulusQuery(variant="omega", k=2, t=0.2)
    assert q.variant == "restricted"


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([EXP, X3]),
       st.floats(0.02, 0.3), st.floats(1.05, 2.0))
def test_monotone_in_t(f, t, factor):
    q1 = ModulusQuery(variant="dt", k=2, t=t, h_points=10, x_samples=512)
    q2 = ModulusQuery(variant="dt", k=2, t=min(t * factor, 0.99),
                      h_points=10, x_samples=512)
    assert evaluate_modulus(q1, f) <= evaluate_modulus(q2, f) + 1e-12


def test_kernel_agreement_single_case():
    q1 = ModulusQuery(variant="classical", k=2, t=0.2, p=math.inf,
                      h_points=8, x_samples=256)
    q2 = ModulusQuery(variant="classical", k=2, t=0.2, p=math.inf,
                      h_points=8, x_samples=256, kernel="stieltjes")
    a, b = evaluate_modulus(q1, EXP), evaluate_modulus(q2, EXP)
    assert b == pytest.approx(a, rel=1e-5)


def test_iterated_integral_matches_difference():
    x = np.linspace(-0.5, 0.5, 11)
    direct = symmetric_difference(EXP, 2, 0.15, x)
    via = difference_via_iterated_integral(EXP, 2, 0.15, x)
    assert np.allclose(via, direct, rtol=1e-6, atol=1e-10)


def test_iterated_integral_needs_smoothness():
    rough = catalog_lookup("abspow", [0.0, 1.5])
    with pytest.raises(SmoothnessError):
        difference_via_iterated_integral(rough, 2, 0.1, np.array([0.0]))


def test_cutoff_weight_vanishes_at_ends():
    v = cutoff_weight(2, 2, 0.1, np.array([-1.0, 0.0, 1.0]))
    assert v[0] == 0.0 and v[2] == 0.0
    assert v[1] == 0.81  # (1 - kh/2)^2 at the center
    assert np.all(cutoff_weight(0, 2, 0.1, np.linspace(-1, 1, 9)) == 1.0)


def test_delta_factor_example():
    # k=1, q=1, p=2q: the log branch, value 0.25 * sqrt(ln 4)
    assert delta_factor(1, 1.0, 2.0, 0.25) == pytest.approx(
        0.2943525056, abs=1e-9)
    assert "ln delta" in delta_factor_branch(1, 1.0, 2.0)


def test_delta_factor_branches():
    assert delta_factor_branch(1, 1.0, 1.5) != delta_factor_branch(1, 1.0, 2.0)
    assert delta_factor_branch(1, 1.0, 3.0) != delta_factor_branch(1, 1.0, 2.0)
    # all branches shrink as delta does
    for p in (1.5, 2.0, 3.0):
        assert delta_factor(1, 1.0, p, 0.01) < delta_factor(1, 1.0, p, 0.2)


def test_limit_scan_decreases_to_zero():
    q = ModulusQuery(variant="weighted_dt", k=2, t=0.5, r=1, p=2.0,
                     weight=JacobiWeight(0.5, 0.5), h_points=10, x_samples=512)
    rep = modulus_limit_scan(q, EXP, [0.4, 0.2, 0.1, 0.05])
    vals = rep.values
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.25 * vals[0]
    assert all(v <= rep.ceiling + 1e-9 for v in vals)
