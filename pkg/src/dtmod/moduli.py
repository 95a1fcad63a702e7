"""Finite differences and sup-over-step moduli of smoothness.

Six variants share one evaluation engine: a geometric step grid h_1 = t >
h_2 > ... (40 points by default), a per-step integrand assembled from a
symmetric difference, and a weighted L_p norm from :mod:`dtmod.quad`; the
modulus is the grid maximum.  Comparisons between variants must use identical
grids, which the harness guarantees by sharing one query shape.

Variants (``ModulusQuery.variant``):

* ``classical`` — plain-step difference of f, unit weight.
* ``dt`` — phi-scaled step, integrand phi^r * diff(f), unit weight.
* ``weighted_dt`` — phi-step difference of f^(r), integrand w * phi^r * diff;
  additionally requires t < 2/k.
* ``main_part`` — same integrand as weighted_dt (no extra precondition).
* ``restricted`` — main_part with the norm taken over [-1 + A h^2, 1 - A h^2].
* ``kls`` — w * cutoff_weight * diff(f^(r)), the cutoff replacing phi^r.

Differences come in two interchangeable kernels: the binomial sum
(``classical`` kernel) and the iterated-integral form (``stieltjes`` kernel),
which brackets the k-fold integral of f^(k) over the step window and agrees
with the sum for smooth functions.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence

import numpy as np

from . import _backend
from .errors import HypothesisViolationError, SmoothnessError
from .fnspace import FunctionExpr, JacobiWeight, phi
from .quad import NormQuery, weighted_norm
from .stieltjes import sliding_extrema

__all__ = ["ModulusQuery", "symmetric_difference", "phi_step_difference",
           "difference_via_iterated_integral", "cutoff_weight",
           "evaluate_modulus", "modulus_limit_scan", "ScanReport",
           "delta_factor", "delta_factor_branch"]

_VARIANTS = ("classical", "dt", "weighted_dt", "main_part", "restricted", "kls")
_DIFFERENTIATING = ("weighted_dt", "main_part", "restricted", "kls")


def _as_points(x):
    scalar = np.isscalar(x)
    return scalar, np.atleast_1d(np.asarray(x, dtype=np.float64))


def _diff_values(f, k: int, h: float, x: np.ndarray, phi_step: bool) -> np.ndarray:
    """Masked symmetric difference; FunctionExpr goes through the backend."""
    if isinstance(f, FunctionExpr):
        return _backend.diff_table(*f._table(), k, h, x, phi_step)
    step = h * phi(x) if phi_step else np.full_like(x, h)
    half = 0.5 * k * step
    mask = (x - half >= -1.0) & (x + half <= 1.0)
    out = np.zeros_like(x)
    if not mask.any():
        return out
    xm, sm = x[mask], step[mask]
    acc = np.zeros_like(xm)
    for i in range(k + 1):
        sign = -1.0 if (k - i) % 2 else 1.0
        acc += sign * math.comb(k, i) * np.asarray(f(xm + 0.5 * (2 * i - k) * sm))
    out[mask] = acc
    return out


def symmetric_difference(f, k: int, h: float, x):
    """k-th symmetric difference with plain step h; 0 when the window leaves [-1, 1]."""
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    if h <= 0:
        raise ValueError("step h must be positive")
    scalar, xv = _as_points(x)
    out = _diff_values(f, k, h, xv, phi_step=False)
    return float(out[0]) if scalar else out


def phi_step_difference(f, k: int, h: float, x):
    """Symmetric difference with the half-circle step h*sqrt(1-x^2)."""
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    if h <= 0:
        raise ValueError("step h must be positive")
    scalar, xv = _as_points(x)
    out = _diff_values(f, k, h, xv, phi_step=True)
    return float(out[0]) if scalar else out


_BAND_COUNTS: dict[tuple[int, int], np.ndarray] = {}


def _band_counts(k: int, depth: int) -> np.ndarray:
    """Number of k-cell index tuples per diagonal band (uniform cells)."""
    key = (k, depth)
    got = _BAND_COUNTS.get(key)
    if got is None:
        ones = np.ones(1 << depth)
        acc = ones
        for _ in range(k - 1):
            acc = np.convolve(acc, ones)
        got = _BAND_COUNTS[key] = acc
    return got


def _iterated_diff_values(fk: FunctionExpr, k: int, h: float, x: np.ndarray,
                          phi_step: bool, depth: int) -> np.ndarray:
    """Bracket midpoint of the k-fold window integral of fk = f^(k), batched over x."""
    step = h * phi(x) if phi_step else np.full_like(x, h)
    half = 0.5 * k * step
    mask = (x - half >= -1.0) & (x + half <= 1.0)
    out = np.zeros_like(x)
    if not mask.any():
        return out
    xm, sm = x[mask], step[mask]
    npts = k * (1 << depth) + 1
    tau = np.linspace(-0.5 * k, 0.5 * k, npts)
    counts = _band_counts(k, depth)
    vals = np.empty_like(xm)
    block = max(1, (1 << 21) // npts)
    for lo in range(0, xm.size, block):
        xs = xm[lo:lo + block]
        ss = sm[lo:lo + block]
        grid = xs[:, None] + ss[:, None] * tau[None, :]
        fv = fk.eval(grid.ravel()).reshape(grid.shape)
        cmin = np.minimum(fv[:, :-1], fv[:, 1:])
        cmax = np.maximum(fv[:, :-1], fv[:, 1:])
        mins, maxs = sliding_extrema(cmin, cmax, k)
        cellw = (ss / (1 << depth)) ** k
        lower = cellw * (mins @ counts)
        upper = cellw * (maxs @ counts)
        vals[lo:lo + block] = 0.5 * (lower + upper)
    out[mask] = vals
    return out


def difference_via_iterated_integral(f: FunctionExpr, k: int, h: float, x,
                                     depth: int = 10):
    """Difference through the window-integral identity.

    Evaluates the k-fold iterated integral of f^(k) over the cube
    [-h/2, h/2]^k shifted to x (integrand f^(k)(x + u_1 + ... + u_k)), which
    equals the plain-step symmetric difference whenever the window stays
    inside [-1, 1]; outside, the cutoff value 0 is returned to match.
    """
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    if h <= 0:
        raise ValueError("step h must be positive")
    if f.smoothness < k:
        raise SmoothnessError(
            f"{f.label}: window-integral form needs smoothness >= {k}, "
            f"have {f.smoothness}", condition="smoothness-deficit")
    fk = f.derivative(k)
    scalar, xv = _as_points(x)
    out = _iterated_diff_values(fk, k, h, xv, phi_step=False, depth=depth)
    return float(out[0]) if scalar else out


def cutoff_weight(r: int, k: int, h: float, x):
    """Endpoint cutoff ((1 - x - khphi/2)(1 + x - khphi/2))^(r/2).

    Positive exactly where the phi-step difference window stays inside
    [-1, 1] (the two factors are the window's endpoint margins); 0 elsewhere.
    r = 0 degenerates to the indicator of the admissible set.
    """
    if r < 0:
        raise ValueError("cutoff exponent r must be >= 0")
    scalar, xv = _as_points(x)
    halfstep = 0.5 * k * h * phi(xv)
    f1 = 1.0 - xv - halfstep
    f2 = 1.0 + xv - halfstep
    ok = (f1 >= 0.0) & (f2 >= 0.0)
    out = np.zeros_like(xv)
    if r == 0:
        out[ok] = 1.0
    else:
        out[ok] = (f1[ok] * f2[ok]) ** (0.5 * r)
    return float(out[0]) if scalar else out


@dataclasses.dataclass(frozen=True)
class ModulusQuery:
    """One modulus request; see the module docstring for the variant table.

    ``A`` only matters for the ``restricted`` variant.  ``kernel`` selects the
    difference implementation (``classical`` or ``stieltjes``); the stieltjes
    kernel brackets window integrals at ``kernel_depth`` dyadic levels.
    """

    variant: str
    k: int
    t: float
    r: int = 0
    p: float = math.inf
    weight: JacobiWeight | None = None
    A: float = 1.0
    kernel: str = "classical"
    h_points: int = 40
    x_samples: int = 4096
    panels: int = 256
    kernel_depth: int = 10

    def __post_init__(self):
        v = self.variant.lower().replace("-", "_").replace("weighteddt", "weighted_dt")
        v = {"mainpart": "main_part", "omega": "restricted", "psi": "main_part"}.get(v, v)
        object.__setattr__(self, "variant", v)
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {_VARIANTS}")
        if self.kernel not in ("classical", "stieltjes"):
            raise ValueError("kernel must be 'classical' or 'stieltjes'")
        if self.k < 1 or self.r < 0:
            raise ValueError("need k >= 1 and r >= 0")
        if self.t <= 0:
            raise ValueError("step bound t must be positive")
        if not (self.p > 0):
            raise ValueError("p must be positive")
        if self.A <= 0:
            raise ValueError("restriction strength A must be positive")
        if self.t > 2.0 / self.k + 1e-15:
            raise HypothesisViolationError(
                f"t = {self.t} exceeds 2/k = {2.0 / self.k}: every difference "
                "window leaves [-1, 1]", condition="step-bound")
        if self.variant == "weighted_dt" and self.t >= 2.0 / self.k:
            raise HypothesisViolationError(
                f"weighted variant requires t < 2/k = {2.0 / self.k}, got {self.t}",
                condition="step-bound-strict")
        if self.variant in ("classical", "dt") and self.weight is not None \
                and not self.weight.is_unit:
            raise HypothesisViolationError(
                f"{self.variant} variant is unweighted; drop the Jacobi weight",
                condition="unweighted-variant")
        if self.weight is not None and not self.weight.admissible_for(self.p):
            raise HypothesisViolationError(
                f"weight ({self.weight.alpha},{self.weight.beta}) inadmissible "
                f"for p={self.p}", condition="inadmissible-weight")

    def h_grid(self) -> np.ndarray:
        """Geometric grid from t down three decades, largest first."""
        j = np.arange(self.h_points, dtype=np.float64)
        return self.t * 10.0 ** (-3.0 * j / (self.h_points - 1))


def _modulus_target(q: ModulusQuery, f: FunctionExpr,
                    check_smoothness: bool = True) -> FunctionExpr:
    """The function the difference acts on, with smoothness checks."""
    if check_smoothness and q.k + q.r > f.smoothness:
        raise SmoothnessError(
            f"{f.label}: needs k + r = {q.k + q.r} <= smoothness "
            f"{f.smoothness}", condition="smoothness-deficit")
    if q.variant in _DIFFERENTIATING:
        if q.r > f.max_derivative_order:
            raise SmoothnessError(
                f"{f.label}: needs derivative order {q.r}, representable up to "
                f"{f.max_derivative_order}", condition="smoothness-deficit")
        return f.derivative(q.r)
    return f


def _integrand_for(q: ModulusQuery, target: FunctionExpr, h: float) -> Callable:
    phi_step = q.variant != "classical"
    if q.kernel == "classical":
        def base(x):
            return _diff_values(target, q.k, h, x, phi_step)
    else:
        fk = target.derivative(q.k)

        def base(x):
            return _iterated_diff_values(fk, q.k, h, x, phi_step, q.kernel_depth)

    if q.variant in ("dt", "weighted_dt", "main_part", "restricted") and q.r > 0:
        r = q.r

        def integrand(x):
            return phi(x) ** r * base(x)
    elif q.variant == "kls":
        r, k = q.r, q.k

        def integrand(x):
            return cutoff_weight(r, k, h, x) * base(x)
    else:
        integrand = base
    return integrand


def evaluate_modulus(q: ModulusQuery, f: FunctionExpr,
                     check_smoothness: bool = True) -> float:
    """Grid-sup modulus for the query's variant.

    ``check_smoothness=False`` admits piecewise targets whose global
    smoothness order is below k + r; the difference operator itself only
    needs pointwise values, so campaign code uses this for splines.
    """
    target = _modulus_target(q, f, check_smoothness)
    weight = q.weight if q.variant in _DIFFERENTIATING else None
    if q.variant == "restricted" and q.A * q.t * q.t >= 1.0:
        raise HypothesisViolationError(
            f"restricted domain empty: A t^2 = {q.A * q.t * q.t} >= 1",
            condition="empty-restricted-domain")
    best = 0.0
    for h in q.h_grid():
        interval = (-1.0, 1.0)
        if q.variant == "restricted":
            edge = 1.0 - q.A * h * h
            interval = (-edge, edge)
        nq = NormQuery(integrand=_integrand_for(q, target, float(h)),
                       p=q.p, weight=weight, interval=interval,
                       panels=q.panels, inf_samples=q.x_samples)
        best = max(best, weighted_norm(nq))
    return best


@dataclasses.dataclass(frozen=True)
class ScanReport:
    ts: tuple[float, ...]
    values: tuple[float, ...]
    ceiling: float
    ceiling_constant: float
    monotone: bool


def modulus_limit_scan(q: ModulusQuery, f: FunctionExpr,
                       ts: Sequence[float]) -> ScanReport:
    """Modulus along a decreasing t-ladder, with the norm ceiling recorded.

    The ceiling is C * ||w phi^r g||_p with g the difference target and
    C = 2^k for p >= 1 (binomial triangle bound) and 2^(k/p) for p < 1
    (pairwise quasi-triangle iterated over the binomial sum).
    """
    ts = [float(v) for v in ts]
    if any(b >= a for a, b in zip(ts, ts[1:])) or ts[-1] <= 0:
        raise ValueError("t ladder must be strictly decreasing and positive")
    values = tuple(evaluate_modulus(dataclasses.replace(q, t=t), f) for t in ts)
    target = _modulus_target(q, f)
    r = q.r if q.variant != "classical" else 0

    def ceil_integrand(x):
        out = np.asarray(target.eval(x))
        return phi(x) ** r * out if r else out

    weight = q.weight if q.variant in _DIFFERENTIATING else None
    norm = weighted_norm(NormQuery(integrand=ceil_integrand, p=q.p, weight=weight,
                                   panels=q.panels, inf_samples=q.x_samples))
    const = 2.0 ** q.k if q.p >= 1 else 2.0 ** (q.k / q.p)
    monotone = all(a >= b - 1e-12 * max(1.0, abs(a)) for a, b in zip(values, values[1:]))
    return ScanReport(tuple(ts), values, const * norm, const, monotone)


def delta_factor(k: int, qq: float, p: float, delta: float) -> float:
    """Piecewise step-size factor from the modulus-equivalence literature.

    Branches: k >= 2 and (k = 1, p < 2q) both give delta^(2/q - 2/p) — they
    coincide as printed; see :func:`delta_factor_branch` for the flag.  At
    k = 1, p = 2q the value is (delta * sqrt|ln delta|)^(1/q); for p > 2q it
    is delta^(1/q).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if qq <= 0 or p <= 0:
        raise ValueError("q and p must be positive")
    if not 0.0 < delta < 1.0:
        raise HypothesisViolationError(
            f"delta must lie in (0, 1), got {delta}", condition="delta-range")
    if k >= 2 or p < 2.0 * qq:
        return delta ** (2.0 / qq - 2.0 / p)
    if p == 2.0 * qq:
        return (delta * math.sqrt(abs(math.log(delta)))) ** (1.0 / qq)
    return delta ** (1.0 / qq)


def delta_factor_branch(k: int, qq: float, p: float) -> str:
    """Branch tag for :func:`delta_factor`, flagging the printed duplication."""
    if k >= 2:
        return "k>=2: delta^(2/q-2/p) [duplicate of k=1,p<2q branch]"
    if p < 2.0 * qq:
        return "k=1,p<2q: delta^(2/q-2/p) [duplicate of k>=2 branch]"
    if p == 2.0 * qq:
        return "k=1,p=2q: (delta*sqrt|ln delta|)^(1/q)"
    return "k=1,p>2q: delta^(1/q)"
