"""Darboux-type Stieltjes integration against nondecreasing integrators.

One fold: lower/upper Darboux sums of a bounded integrand against integrator
increments L(u_{j+1}) - L(u_j) over dyadic partitions; the value is the
midpoint of the final bracket and the bracket width is reported as ``gap``.
Several folds: the tensor-product construct over D^i.  Two integrand
conventions are supported (see :class:`LSQuery`): ``univariate`` treats the
integrand as a function of the first coordinate only, ``sum`` as a function of
u_1 + ... + u_i, which is what the difference-kernel identity in
:mod:`dtmod.moduli` needs.

Cell extrema are sampled at cell endpoints (sampled Darboux): exact for
monotone pieces and convergent for the regulated integrands this package
meets.  Lower sums are nondecreasing and upper sums nonincreasing in depth by
construction, since coarse-cell extrema are rolled up from the finest samples.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .errors import NonConvergenceError

__all__ = ["Integrator", "LSQuery", "LSResult", "ls_integral",
           "iterated_ls_integral", "is_ls_integrable", "ls_linearity_check"]

_CHECK_GRID = 1024


class Integrator:
    """Nondecreasing integrator L on [-1, 1] (identity, affine, step, compose).

    Nondecrease is validated on a 1024-point grid at construction; affine
    slopes and step jumps are additionally checked in closed form.
    """

    __slots__ = ("kind", "_fn", "_desc")

    def __init__(self, kind: str, fn: Callable[[np.ndarray], np.ndarray], desc: str):
        self.kind = kind
        self._fn = fn
        self._desc = desc
        u = np.linspace(-1.0, 1.0, _CHECK_GRID)
        v = self(u)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"integrator {desc} is not finite on [-1, 1]")
        if np.any(np.diff(v) < -1e-12):
            raise ValueError(f"integrator {desc} is decreasing somewhere on [-1, 1]")

    def __call__(self, u):
        scalar = np.isscalar(u)
        out = np.asarray(self._fn(np.atleast_1d(np.asarray(u, dtype=np.float64))),
                         dtype=np.float64)
        return float(out[0]) if scalar else out

    @staticmethod
    def identity() -> "Integrator":
        return Integrator("identity", lambda u: u, "identity")

    @staticmethod
    def affine(a: float, b: float = 0.0) -> "Integrator":
        if a < 0:
            raise ValueError(f"affine integrator needs slope >= 0, got {a}")
        return Integrator("affine", lambda u: a * u + b, f"affine({a},{b})")

    @staticmethod
    def step(points: Sequence[float], jumps: Sequence[float], base: float = 0.0) -> "Integrator":
        """Right-continuous pure-jump integrator: L(u) = base + sum of jumps at points <= u."""
        pts = np.asarray(points, dtype=np.float64)
        jmp = np.asarray(jumps, dtype=np.float64)
        if pts.size != jmp.size or pts.size == 0:
            raise ValueError("step integrator needs matching nonempty points and jumps")
        if np.any(jmp <= 0):
            raise ValueError("step jumps must be positive")
        order = np.argsort(pts)
        pts, jmp = pts[order], jmp[order]
        cum = np.concatenate([[0.0], np.cumsum(jmp)])

        def fn(u):
            return base + cum[np.searchsorted(pts, u, side="right")]

        return Integrator("step", fn, f"step({pts.size} jumps)")

    @staticmethod
    def compose(outer: "Integrator", inner: "Integrator") -> "Integrator":
        return Integrator("composition", lambda u: outer(inner(u)),
                          f"compose({outer._desc},{inner._desc})")

    def __repr__(self):
        return f"Integrator({self._desc})"


@dataclasses.dataclass(frozen=True)
class LSQuery:
    """One Stieltjes integration request.

    ``mode="univariate"`` reads the integrand as f(u_1); ``mode="sum"`` as
    f(u_1 + ... + u_i).  ``domain`` is a union of closed intervals inside
    [-1, 1]; sum mode supports a single interval (all difference-kernel uses).
    """

    integrand: Callable[[np.ndarray], np.ndarray]
    integrators: tuple[Integrator, ...]
    domain: tuple[tuple[float, float], ...] = ((-1.0, 1.0),)
    depth: int = 16
    tol: float = 1e-4
    mode: str = "univariate"

    def __post_init__(self):
        if not 1 <= len(self.integrators) <= 4:
            raise ValueError("fold count must lie in 1..4")
        if self.mode not in ("univariate", "sum"):
            raise ValueError(f"unknown integrand mode {self.mode!r}")
        if not self.domain:
            raise ValueError("empty domain")
        total = 0.0
        for a, b in self.domain:
            if not (-1.0 <= a < b <= 1.0):
                raise ValueError(f"domain interval ({a},{b}) invalid")
            total += b - a
        if total <= 0:
            raise ValueError("domain measure must be positive")
        if not 1 <= self.depth <= 24:
            raise ValueError("depth must lie in 1..24")
        if self.mode == "sum":
            if len(self.domain) != 1:
                raise ValueError("sum mode supports a single-interval domain")
            if len(self.integrators) << self.depth > 1 << 22:
                raise ValueError("sum mode size cap exceeded (folds * 2^depth)")

    @property
    def folds(self) -> int:
        return len(self.integrators)


@dataclasses.dataclass(frozen=True)
class LSResult:
    value: float
    gap: float
    lower: float
    upper: float
    levels: tuple[tuple[float, float], ...]  # (lower, upper) per depth 0..d


def _rollup_levels(cmin, cmax, weights_per_level):
    """Darboux sums per level from finest-cell extrema.

    ``cmin``/``cmax`` are finest-level cell extrema (length 2^d);
    ``weights_per_level[l]`` the cell masses at level l (length 2^l).
    Returns [(lower, upper)] for levels 0..d, finest last.
    """
    levels = []
    d = len(weights_per_level) - 1
    m, M = cmin, cmax
    out = [(float(np.dot(weights_per_level[d], m)),
            float(np.dot(weights_per_level[d], M)))]
    for lev in range(d - 1, -1, -1):
        m = np.minimum(m[0::2], m[1::2])
        M = np.maximum(M[0::2], M[1::2])
        out.append((float(np.dot(weights_per_level[lev], m)),
                    float(np.dot(weights_per_level[lev], M))))
    out.reverse()
    return out


def _interval_levels(q: LSQuery, a: float, b: float):
    """Per-level (lower, upper) Darboux sums for one fold on one interval."""
    L = q.integrators[0]
    weights = []
    for lev in range(q.depth + 1):
        grid = np.linspace(a, b, (1 << lev) + 1)
        w = np.diff(L(grid))
        weights.append(np.clip(w, 0.0, None))
    grid = np.linspace(a, b, (1 << q.depth) + 1)
    fv = np.asarray(q.integrand(grid), dtype=np.float64)
    if not np.all(np.isfinite(fv)):
        raise ValueError("integrand not finite on the refinement grid")
    cmin = np.minimum(fv[:-1], fv[1:])
    cmax = np.maximum(fv[:-1], fv[1:])
    return _rollup_levels(cmin, cmax, weights)


def ls_integral(q: LSQuery) -> LSResult:
    """Single-fold Stieltjes integral with refinement bracket.

    Raises :class:`NonConvergenceError` when the finest-level gap exceeds the
    query tolerance (the computable signal that the integrand is outside the
    integrable class for this integrator).
    """
    if q.folds != 1:
        raise ValueError("ls_integral handles one fold; use iterated_ls_integral")
    per_level = None
    for a, b in q.domain:
        lv = _interval_levels(q, a, b)
        if per_level is None:
            per_level = lv
        else:
            per_level = [(x[0] + y[0], x[1] + y[1]) for x, y in zip(per_level, lv)]
    lo, up = per_level[-1]
    gap = up - lo
    if gap > q.tol:
        raise NonConvergenceError(
            f"Darboux gap {gap:.3g} exceeds tolerance {q.tol:.3g} at depth {q.depth}",
            gap=gap)
    return LSResult(0.5 * (lo + up), gap, lo, up, tuple(per_level))


def _fold_masses(q: LSQuery) -> list[float]:
    """Total integrator mass of the domain per fold."""
    out = []
    for L in q.integrators:
        m = 0.0
        for a, b in q.domain:
            m += float(L(b)) - float(L(a))
        out.append(max(m, 0.0))
    return out


def sliding_extrema(cell_min: np.ndarray, cell_max: np.ndarray, k: int):
    """Window extrema over k consecutive cells along the last axis.

    For arrays of n cells returns arrays of n - k + 1 windows.  Shared with
    the difference-kernel fast path in :mod:`dtmod.moduli`.
    """
    n = cell_min.shape[-1]
    span = n - k + 1
    mins = np.minimum.reduce([cell_min[..., t:t + span] for t in range(k)])
    maxs = np.maximum.reduce([cell_max[..., t:t + span] for t in range(k)])
    return mins, maxs


def convolve_masses(per_fold: Sequence[np.ndarray]) -> np.ndarray:
    """Convolution of per-fold cell-mass arrays: mass of each diagonal band.

    Entry M of the result is the total product mass of cells whose indices sum
    to M, which is exactly the weight multiplying the band extremum of a
    sum-mode integrand.
    """
    acc = np.asarray(per_fold[0], dtype=np.float64)
    for w in per_fold[1:]:
        w = np.asarray(w, dtype=np.float64)
        if min(acc.size, w.size) > 512:
            acc = fftconvolve(acc, w)
        else:
            acc = np.convolve(acc, w)
    return np.clip(acc, 0.0, None)


def _sum_mode_levels(q: LSQuery):
    """Per-level (lower, upper) for a sum-mode multi-fold query."""
    (a, b), = q.domain
    k = q.folds
    d = q.depth
    # per-fold cell masses at every level
    fold_weights = []
    for L in q.integrators:
        per_level = []
        for lev in range(d + 1):
            grid = np.linspace(a, b, (1 << lev) + 1)
            per_level.append(np.clip(np.diff(L(grid)), 0.0, None))
        fold_weights.append(per_level)
    sgrid = np.linspace(k * a, k * b, k * (1 << d) + 1)
    fv = np.asarray(q.integrand(sgrid), dtype=np.float64)
    if not np.all(np.isfinite(fv)):
        raise ValueError("integrand not finite on the refinement grid")
    cmin = np.minimum(fv[:-1], fv[1:])
    cmax = np.maximum(fv[:-1], fv[1:])
    levels = []
    for lev in range(d, -1, -1):
        band = convolve_masses([fold_weights[j][lev] for j in range(k)])
        mins, maxs = sliding_extrema(cmin, cmax, k)
        levels.append((float(np.dot(band, mins)), float(np.dot(band, maxs))))
        if lev:
            cmin = np.minimum(cmin[0::2], cmin[1::2])
            cmax = np.maximum(cmax[0::2], cmax[1::2])
    levels.reverse()
    return levels


def iterated_ls_integral(q: LSQuery) -> LSResult:
    """Tensor-product Stieltjes integral over D^folds.

    Univariate mode separates exactly: the first-fold bracket scales by the
    product of the remaining folds' total masses.  Sum mode brackets the
    integrand over diagonal bands u_1 + ... + u_k = const.
    """
    if q.folds == 1:
        return ls_integral(q)
    if q.mode == "univariate":
        base = dataclasses.replace(q, integrators=(q.integrators[0],), tol=np.inf)
        res = ls_integral(base)
        scale = 1.0
        for m in _fold_masses(q)[1:]:
            scale *= m
        lo, up = res.lower * scale, res.upper * scale
        levels = tuple((l * scale, u * scale) for l, u in res.levels)
    else:
        levels = tuple(_sum_mode_levels(q))
        lo, up = levels[-1]
    gap = up - lo
    if gap > q.tol:
        raise NonConvergenceError(
            f"Darboux gap {gap:.3g} exceeds tolerance {q.tol:.3g} at depth {q.depth}",
            gap=gap)
    return LSResult(0.5 * (lo + up), gap, lo, up, levels)


def is_ls_integrable(q: LSQuery, tol: float | None = None) -> tuple[bool, float]:
    """Computable membership test: does the Darboux bracket close to ``tol``?"""
    probe = dataclasses.replace(q, tol=np.inf)
    res = iterated_ls_integral(probe) if q.folds > 1 else ls_integral(probe)
    limit = q.tol if tol is None else tol
    return bool(res.gap <= limit), res.gap


@dataclasses.dataclass(frozen=True)
class LinearityReport:
    scaling_residual: float
    additivity_residual: float
    combined_gap: float
    scaled_value: float
    sum_value: float


def ls_linearity_check(f1, f2, v: float, q_template: LSQuery) -> LinearityReport:
    """Residuals of integral linearity: |I(v f1) - v I(f1)| and |I(f1+f2) - I(f1) - I(f2)|."""
    if v <= 0:
        raise ValueError("scaling factor must be positive")

    def run(fn):
        qq = dataclasses.replace(q_template, integrand=fn)
        return iterated_ls_integral(qq) if qq.folds > 1 else ls_integral(qq)

    r1 = run(f1)
    r2 = run(f2)
    rv = run(lambda u: v * np.asarray(f1(u)))
    rs = run(lambda u: np.asarray(f1(u)) + np.asarray(f2(u)))
    return LinearityReport(
        scaling_residual=abs(rv.value - v * r1.value),
        additivity_residual=abs(rs.value - r1.value - r2.value),
        combined_gap=r1.gap + r2.gap + rv.gap + rs.gap,
        scaled_value=rv.value,
        sum_value=rs.value,
    )
