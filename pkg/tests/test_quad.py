import math

import numpy as np
import pytest

from dtmod import InadmissibleWeightError, JacobiWeight, NormQuery, weighted_norm
from dtmod.quad import gauss_grid, refinement_report


def test_constant_l2():
    q = NormQuery(integrand=lambda x: np.ones_like(x), p=2.0)
    assert weighted_norm(q) == pytest.approx(math.sqrt(2.0), abs=1e-10)


def test_identity_sup():
    q = NormQuery(integrand=lambda x: x, p=math.inf)
    assert weighted_norm(q) == pytest.approx(1.0, abs=1e-12)


def test_phi_l2():
    # integral of 1 - x^2 over [-1, 1] is 4/3
    q = NormQuery(integrand=lambda x: np.sqrt(1 - x**2), p=2.0)
    assert weighted_norm(q) == pytest.approx(math.sqrt(4.0 / 3.0), abs=1e-8)


def test_l1_of_x():
    q = NormQuery(integrand=lambda x: x, p=1.0)
    assert weighted_norm(q) == pytest.approx(1.0, abs=1e-10)


def test_endpoint_singular_weight_l1():
    # closed form: integral of (1+x)^a over [-1,1] = 2^(a+1)/(a+1)
    a = -0.4
    q = NormQuery(integrand=lambda x: np.ones_like(x), p=1.0,
                  weight=JacobiWeight(a, 0.0))
    # singular endpoint density converges slowly; panel count bounds accuracy
    assert weighted_norm(q) == pytest.approx(2 ** (a + 1) / (a + 1), rel=1e-4)


def test_weighted_sup():
    w = JacobiWeight(1.0, 1.0)
    q = NormQuery(integrand=lambda x: np.ones_like(x), p=math.inf, weight=w)
    # (1+x)(1-x) peaks at 0 with value 1
    assert weighted_norm(q) == pytest.approx(1.0, abs=1e-6)


def test_subinterval():
    q = NormQuery(integrand=lambda x: x, p=2.0, interval=(0.0, 1.0))
    assert weighted_norm(q) == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-10)


def test_quasinorm_small_p():
    # p = 1/2 quasi-norm of the unit constant: (integral of 1^(1/2))^2 = 4
    q = NormQuery(integrand=lambda x: np.ones_like(x), p=0.5)
    assert weighted_norm(q) == pytest.approx(4.0, abs=1e-8)


def test_inadmissible_weight_rejected():
    with pytest.raises(InadmissibleWeightError):
        NormQuery(integrand=lambda x: x, p=math.inf,
                  weight=JacobiWeight(-0.5, 0.0))


def test_query_validation():
    with pytest.raises(ValueError):
        NormQuery(integrand=lambda x: x, p=0.0)
    with pytest.raises(ValueError):
        NormQuery(integrand=lambda x: x, p=2.0, interval=(0.5, 0.2))
    with pytest.raises(ValueError):
        NormQuery(integrand=lambda x: x, p=2.0, panels=8)


def test_gauss_grid_integrates_polys():
    x, wts = gauss_grid(panels=64)
    for m in range(6):
        assert np.dot(wts, x**m) == pytest.approx(
            0.0 if m % 2 else 2.0 / (m + 1), abs=1e-12)


def test_refinement_report_converges():
    q = NormQuery(integrand=np.exp, p=2.0, weight=JacobiWeight(0.5, 0.5))
    rep = refinement_report(q)
    assert rep.refined == pytest.approx(rep.value, rel=1e-7)
    assert rep.rel_change <= 1e-5
