import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtmod import LSQuery, iterated_ls_integral, ls_integral
from dtmod.errors import NonConvergenceError
from dtmod.stieltjes import (Integrator, convolve_masses, ls_linearity_check,
                             sliding_extrema)


def test_identity_integral():
    q = LSQuery(integrand=lambda u: u, integrators=(Integrator.identity(),),
                domain=((0.0, 1.0),), depth=16)
    res = ls_integral(q)
    assert res.value == pytest.approx(0.5, abs=res.gap)
    assert res.gap <= 1e-4
    assert res.lower <= res.value <= res.upper


def test_gap_halves_with_depth():
    vals = []
    for d in (8, 9, 10):
        q = LSQuery(integrand=lambda u: u * u,
                    integrators=(Integrator.identity(),),
                    domain=((0.0, 1.0),), depth=d, tol=1.0)
        vals.append(ls_integral(q).gap)
    assert vals[1] < 0.6 * vals[0]
    assert vals[2] < 0.6 * vals[1]


def test_point_mass_returns_sample():
    L = Integrator.step([0.3], [1.0])
    q = LSQuery(integrand=lambda u: np.cos(u), integrators=(L,),
                domain=((-1.0, 1.0),), depth=20, tol=1e-5)
    res = ls_integral(q)
    assert res.value == pytest.approx(np.cos(0.3), abs=1e-6)


def test_affine_scaling():
    qi = LSQuery(integrand=lambda u: u + 1, integrators=(Integrator.identity(),),
                 domain=((0.0, 1.0),), depth=14, tol=1e-3)
    qa = LSQuery(integrand=lambda u: u + 1,
                 integrators=(Integrator.affine(2.0),),
                 domain=((0.0, 1.0),), depth=14, tol=1e-3)
    ri, ra = ls_integral(qi), ls_integral(qa)
    assert ra.value == pytest.approx(2 * ri.value, abs=2 * (ri.gap + ra.gap))


def test_decreasing_integrator_rejected():
    with pytest.raises(ValueError):
        Integrator.affine(-1.0)
    with pytest.raises(ValueError):
        Integrator.step([0.0], [-0.5])


def test_nonintegrable_pair_raises():
    # integrand jumping exactly at the mass point: bracket cannot close
    L = Integrator.step([0.25], [1.0])
    q = LSQuery(integrand=lambda u: np.where(u < 0.25, 0.0, 1.0),
                integrators=(L,), domain=((-1.0, 1.0),), depth=12, tol=1e-6)
    with pytest.raises(NonConvergenceError):
        ls_integral(q)


def test_two_fold_sum_mode():
    # double integral of (u + v) over [0,1]^2 equals 1
    q = LSQuery(integrand=lambda s: s,
                integrators=(Integrator.identity(), Integrator.identity()),
                domain=((0.0, 1.0),), depth=10, tol=0.1, mode="sum")
    res = iterated_ls_integral(q)
    assert res.value == pytest.approx(1.0, abs=max(res.gap, 1e-4))
    assert res.gap <= 1e-2


def test_linearity_residuals():
    q = LSQuery(integrand=lambda u: u, integrators=(Integrator.identity(),),
                domain=((0.0, 1.0),), depth=12, tol=1e-3)
    rep = ls_linearity_check(lambda u: u * u, np.cos, 1.7, q)
    assert rep.scaling_residual <= 2 * rep.combined_gap + 1e-12
    assert rep.additivity_residual <= 2 * rep.combined_gap + 1e-12


def test_sliding_extrema_window():
    lo = np.array([3.0, 1.0, 2.0, 0.5])
    hi = np.array([4.0, 2.0, 5.0, 1.0])
    wmin, wmax = sliding_extrema(lo, hi, 2)
    assert list(wmin) == [1.0, 1.0, 0.5]
    assert list(wmax) == [4.0, 5.0, 5.0]


def test_convolve_masses_total():
    a = np.array([0.25, 0.75])
    b = np.array([0.5, 0.5])
    out = convolve_masses([a, b])
    assert out.sum() == pytest.approx(1.0, abs=1e-12)
    assert len(out) == 3


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(1.0, 3.0))
def test_bracket_contains_truth_for_power(c, a):
    # integral of u^a over [0, c] = c^(a+1)/(a+1); Darboux bracket must cover it
    q = LSQuery(integrand=lambda u, a=a: u**a,
                integrators=(Integrator.identity(),),
                domain=((0.0, c),), depth=12, tol=1e-2)
    res = ls_integral(q)
    truth = c ** (a + 1) / (a + 1)
    assert res.lower - 1e-12 <= truth <= res.upper + 1e-12
