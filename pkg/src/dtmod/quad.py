"""Weighted L_p quasi-norms on sub-intervals of [-1, 1], 0 < p <= inf.

The p < inf path substitutes x = -cos(theta), which turns both the half-circle
factor sqrt(1-x^2) and Jacobi endpoint factors into smooth or mildly singular
functions of theta, then applies composite Gauss-Legendre panels.  Gauss nodes
are strictly interior, so integrable endpoint singularities (negative weight
exponents above the admissibility line) need no special casing; for those,
:func:`refinement_report` quantifies stability under panel doubling.

The p = inf path maximizes |w*g| over a theta-uniform sample grid and then
polishes around the sample argmax with a golden-section search.  Values are
deterministic for a fixed resolution.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from .errors import DtmodError, InadmissibleWeightError
from .fnspace import JacobiWeight

__all__ = ["NormQuery", "weighted_norm", "quasi_norm_power", "refinement_report",
           "gauss_grid"]

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


@dataclasses.dataclass(frozen=True)
class NormQuery:
    """One norm evaluation request.

    ``integrand`` maps a float64 array of points to an array of values.
    ``weight`` of None means the unit weight.  ``panels`` is the composite
    Gauss-Legendre panel count; ``inf_samples`` the p=inf sample-grid size.
    """

    integrand: Callable[[np.ndarray], np.ndarray]
    p: float
    weight: JacobiWeight | None = None
    interval: tuple[float, float] = (-1.0, 1.0)
    panels: int = 256
    inf_samples: int = 4096

    def __post_init__(self):
        a, b = self.interval
        if not (self.p > 0):
            raise ValueError(f"p must be positive, got {self.p}")
        if not (-1.0 <= a < b <= 1.0):
            raise ValueError(f"interval must be nonempty inside [-1,1], got {self.interval}")
        if self.panels < 64:
            raise ValueError("resolution must be at least 64 panels")
        if self.weight is not None and not self.weight.admissible_for(self.p):
            raise InadmissibleWeightError(
                f"weight ({self.weight.alpha}, {self.weight.beta}) inadmissible for p={self.p}",
                condition="inadmissible-weight")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def gauss_grid(interval: tuple[float, float] = (-1.0, 1.0),
               panels: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Interior nodes x and weights wq with sum wq*g(x) ~ integral of g dx.

    Composite Gauss-Legendre in the arccos variable, so node density grows
    toward the endpoints like the Chebyshev measure; the Jacobian is folded
    into the weights.  Shared by the discrete-objective fitting paths.
    """
    a, b = interval
    ta, tb = math.acos(-a), math.acos(-b)
    edges = np.linspace(ta, tb, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wq = (half[:, None] * _GL_WEIGHTS[None, :]).ravel() * np.sin(theta)
    return -np.cos(theta), wq


def _weighted_values(q: NormQuery, x: np.ndarray) -> np.ndarray:
    vals = np.abs(np.asarray(q.integrand(x), dtype=np.float64))
    if q.weight is not None and not q.weight.is_unit:
        vals = vals * q.weight(x)
    return vals


def quasi_norm_power(q: NormQuery, panels: int | None = None) -> float:
    """Un-rooted integral over the interval of |w*g|^p (p < inf only)."""
    if math.isinf(q.p):
        raise ValueError("quasi_norm_power requires p < inf")
    npanels = panels if panels is not None else q.panels
    a, b = q.interval
    ta, tb = math.acos(-a), math.acos(-b)
    edges = np.linspace(ta, tb, npanels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wq = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    x = -np.cos(theta)
    vals = _weighted_values(q, x)
    if not np.all(np.isfinite(vals)):
        bad = x[~np.isfinite(vals)][:3]
        raise DtmodError(f"non-finite integrand at interior nodes near {bad}")
    return float(np.sum(wq * vals ** q.p * np.sin(theta)))


def _sup_norm(q: NormQuery) -> float:
    a, b = q.interval
    ta, tb = math.acos(-a), math.acos(-b)
    theta = np.linspace(ta, tb, q.inf_samples)
    x = -np.cos(theta)
    x[0], x[-1] = a, b
    vals = _weighted_values(q, x)
    if not np.all(np.isfinite(vals)):
        bad = x[~np.isfinite(vals)][:3]
        raise DtmodError(f"non-finite integrand at sample points near {bad}")
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo = x[max(i - 1, 0)]
    hi = x[min(i + 1, x.size - 1)]
    if hi > lo:
        best = max(best, _golden_max(q, lo, hi))
    return best


def _golden_max(q: NormQuery, lo: float, hi: float, iters: int = 80) -> float:
    """Golden-section maximization of |w*g| on [lo, hi]."""

    def val(t: float) -> float:
        v = _weighted_values(q, np.array([t]))
        return float(v[0]) if np.isfinite(v[0]) else -math.inf

    c = hi - _GOLD * (hi - lo)
    d = lo + _GOLD * (hi - lo)
    fc, fd = val(c), val(d)
    best = max(fc, fd)
    for _ in range(iters):
        if fc < fd:
            lo, c, fc = c, d, fd
            d = lo + _GOLD * (hi - lo)
            fd = val(d)
        else:
            hi, d, fd = d, c, fc
            c = hi - _GOLD * (hi - lo)
            fc = val(c)
        best = max(best, fc, fd)
        if hi - lo < 1e-14:
            break
    return best


def weighted_norm(q: NormQuery) -> float:
    """(integral of |w*g|^p)^(1/p) for p < inf; sup of |w*g| at p = inf."""
    if math.isinf(q.p):
        return _sup_norm(q)
    return quasi_norm_power(q) ** (1.0 / q.p)


@dataclasses.dataclass(frozen=True)
class RefinementReport:
    value: float
    refined: float
    rel_change: float


def refinement_report(q: NormQuery) -> RefinementReport:
    """Stability under panel doubling; consult for negative weight exponents."""
    if math.isinf(q.p):
        v = _sup_norm(q)
        q2 = dataclasses.replace(q, inf_samples=2 * q.inf_samples)
        r = _sup_norm(q2)
    else:
        v = quasi_norm_power(q) ** (1.0 / q.p)
        r = quasi_norm_power(q, panels=2 * q.panels) ** (1.0 / q.p)
    denom = max(abs(v), abs(r), 1e-300)
    return RefinementReport(v, r, abs(v - r) / denom)
