"""Best polynomial approximation in weighted p-norms, plain and shape-constrained.

One candidate type serves three solvers: a discrete exchange for the sup
norm, damped reweighted least squares for finite p >= 1, and a multi-start
coordinate descent labeled heuristic for p < 1.  Constrained fits reuse the
unconstrained solution whenever it already satisfies the sign conditions, so
the constrained error can never silently undercut the unconstrained one.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np
import numpy.polynomial.chebyshev as _cheb

from . import config as _config
from ._solvers import constrained_pnorm_fit, solve_constrained_ls
from .errors import ConfigError, InadmissibleWeightError
from .fnspace import FunctionExpr, InflectionSet, JacobiWeight
from .quad import NormQuery, gauss_grid, weighted_norm
from .shape import coconvexity_check

__all__ = [
    "PolyCandidate",
    "JacksonReport",
    "best_unconstrained",
    "best_coconvex",
    "jackson_tail_check",
]

_FEAS_SLACK = 1e-10
_VALIDATION_SLACK = 1e-8


def _values(f, x: np.ndarray) -> np.ndarray:
    out = f.eval(x) if hasattr(f, "eval") else f(x)
    return np.asarray(out, dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class PolyCandidate:
    """A degree-n fit in the Chebyshev basis with its certified-on-grid error."""

    degree: int
    coefficients: tuple[float, ...]
    error: float
    constraint_residual: float = 0.0
    alternation: tuple[float, ...] = ()
    flags: tuple[str, ...] = ()
    grid: str = ""

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("coefficient count must be degree + 1")
        if self.error < 0:
            raise ValueError("achieved error cannot be negative")

    def eval(self, x):
        return _cheb.chebval(np.asarray(x, dtype=np.float64), self.coefficients)

    __call__ = eval

    def to_function(self) -> FunctionExpr:
        from .fnspace import catalog_lookup
        mono = _cheb.cheb2poly(np.asarray(self.coefficients))
        return catalog_lookup("poly", [float(v) for v in mono],
                              label=f"fit(deg={self.degree})")


def _resolve(w: JacobiWeight | None, p: float) -> JacobiWeight:
    w = w if w is not None else JacobiWeight(0.0, 0.0)
    if not w.admissible_for(p):
        raise InadmissibleWeightError(
            f"weight {w!r} is not admissible for p={p}",
            condition="weight-admissibility")
    return w


def _certified_error(f, coefs: np.ndarray, w: JacobiWeight, p: float,
                     cfg: _config.RunConfig) -> float:
    def residual(x):
        xv = np.asarray(x, dtype=np.float64)
        return _values(f, xv) - _cheb.chebval(xv, coefs)

    nq = NormQuery(integrand=residual, p=p, weight=w,
                   panels=cfg.quad_panels, inf_samples=cfg.inf_samples)
    return weighted_norm(nq)


def _grid_tag(p: float, cfg: _config.RunConfig) -> str:
    if math.isinf(p):
        return f"sup:{cfg.inf_samples}+polish"
    return f"gauss:{cfg.quad_panels}x8"


# ---------------------------------------------------------------------------
# sup-norm exchange

def _exchange_grid(n: int) -> np.ndarray:
    return np.cos(np.linspace(math.pi, 0.0, 4 * n + 17))


def _alternating_extrema(err: np.ndarray, n: int):
    """Per-sign-run argmax indices, reduced to n+2 alternating points."""
    m = err.size
    s = np.sign(err)
    for i in range(m):
        if s[i] == 0.0:
            s[i] = s[i - 1] if i else 1.0
    idx: list[int] = []
    start = 0
    for i in range(1, m + 1):
        if i == m or s[i] != s[i - 1]:
            idx.append(start + int(np.argmax(np.abs(err[start:i]))))
            start = i
    if len(idx) < n + 2:
        return None
    a = np.abs(err)
    while len(idx) > n + 2:
        if len(idx) == n + 3:
            idx.pop(0 if a[idx[0]] <= a[idx[-1]] else -1)
        else:
            j = min(range(len(idx) - 1),
                    key=lambda t: max(a[idx[t]], a[idx[t + 1]]))
            del idx[j:j + 2]
    return np.asarray(idx, dtype=np.intp)


def _remez(fv: np.ndarray, wv: np.ndarray, X: np.ndarray, n: int,
           iters: int, tol: float = 1e-8):
    V = _cheb.chebvander(X, n)
    m = X.size
    refs = np.round(np.linspace(0, m - 1, n + 2)).astype(np.intp)
    sgn = np.where(np.arange(n + 2) % 2 == 0, 1.0, -1.0)
    fscale = max(1.0, float(np.max(np.abs(fv))))
    best = (None, math.inf, refs)
    flags: list[str] = []
    for _ in range(iters):
        A = np.empty((n + 2, n + 2))
        A[:, :n + 1] = V[refs]
        A[:, n + 1] = sgn / wv[refs]
        try:
            sol = np.linalg.solve(A, fv[refs])
        except np.linalg.LinAlgError:
            flags.append("singular-reference-system")
            break
        c, level = sol[:n + 1], sol[n + 1]
        err = wv * (fv - V @ c)
        amax = float(np.max(np.abs(err)))
        if amax < best[1]:
            best = (c, amax, refs.copy())
        if amax <= 1e-14 * fscale or amax - abs(level) <= tol * amax:
            return c, refs, flags
        nxt = _alternating_extrema(err, n)
        if nxt is None:
            flags.append("degenerate-error-signature")
            break
        refs = nxt
    else:
        flags.append("iteration-cap")
    return best[0], best[2], flags


def _fit_sup(f, n: int, w: JacobiWeight, grid, cfg: _config.RunConfig):
    X = np.sort(np.asarray(grid, dtype=np.float64)) if grid is not None \
        else _exchange_grid(n)
    wv = w(X)
    keep = wv > 1e-12          # zero-weight points can never be references
    X, wv = X[keep], wv[keep]
    if X.size < n + 2:
        raise ConfigError(f"exchange grid too small: {X.size} < {n + 2}")
    fv = _values(f, X)
    c, refs, flags = _remez(fv, wv, X, n, cfg.approx_iters)
    return c, tuple(float(v) for v in X[refs]), flags


# ---------------------------------------------------------------------------
# finite-p discretized objective

def _discrete_objective(V, fv, wv, bq, p):
    def objective(c):
        r = wv * (fv - V @ c)
        return float(np.sum(bq * np.abs(r) ** p))
    return objective


def _l2_start(V, fv, wv, bq):
    rs = np.sqrt(bq) * wv
    return np.linalg.lstsq(V * rs[:, None], rs * fv, rcond=None)[0]


def _irls(V, fv, wv, bq, p, c0, iters):
    objective = _discrete_objective(V, fv, wv, bq, p)
    sb = np.sqrt(bq)
    c, obj = c0.copy(), objective(c0)
    flags: list[str] = []
    for _ in range(iters):
        r = wv * (fv - V @ c)
        u = np.maximum(np.abs(r), 1e-10) ** (0.5 * (p - 2.0))
        rs = sb * u * wv
        target = np.linalg.lstsq(V * rs[:, None], rs * fv, rcond=None)[0]
        lam, moved = 1.0, False
        for _ in range(10):
            cand = (1.0 - lam) * c + lam * target
            ocand = objective(cand)
            if ocand <= obj * (1.0 + 1e-15):
                moved = ocand < obj * (1.0 - 1e-13)
                c, obj = cand, ocand
                break
            lam *= 0.5
        if not moved:
            return c, obj, flags
    flags.append("iteration-cap")
    return c, obj, flags


def _coordinate_descent(V, fv, wv, bq, p, c0, iters, rng, restarts):
    from scipy.optimize import minimize_scalar
    objective = _discrete_objective(V, fv, wv, bq, p)
    scale = 1.0 + float(np.max(np.abs(c0)))
    starts = [c0] + [c0 + 0.1 * scale * rng.standard_normal(c0.size)
                     for _ in range(restarts)]
    best_c, best_obj = c0, objective(c0)
    for start in starts:
        c, obj = start.copy(), objective(start)
        for _ in range(max(3, iters // 10)):
            prev = obj
            for j in range(c.size):
                lo, hi = c[j] - 2.0 * scale, c[j] + 2.0 * scale

                def along(v, j=j):
                    trial = c.copy()
                    trial[j] = v
                    return objective(trial)

                res = minimize_scalar(along, bounds=(lo, hi), method="bounded",
                                      options={"xatol": 1e-10})
                if res.fun < obj:
                    c[j], obj = float(res.x), float(res.fun)
            if obj >= prev * (1.0 - 1e-12):
                break
        if obj < best_obj:
            best_c, best_obj = c, obj
    return best_c, best_obj, ["heuristic-nonconvex"]


def _fit_pnorm(f, n, w, grid, p, cfg):
    if grid is not None:
        raise ConfigError("custom grids apply to the sup-norm exchange only")
    panels = cfg.quad_panels if p >= 1 else max(64, cfg.quad_panels // 4)
    xq, bq = gauss_grid(panels=panels)
    V = _cheb.chebvander(xq, n)
    wv, fv = w(xq), _values(f, xq)
    c0 = _l2_start(V, fv, wv, bq)
    if p == 2:
        return c0, []
    rng = np.random.default_rng(cfg.seed)
    if p < 1:
        c, _, flags = _coordinate_descent(V, fv, wv, bq, p, c0,
                                          cfg.approx_iters, rng,
                                          cfg.approx_restarts)
        return c, flags
    c, obj, flags = _irls(V, fv, wv, bq, p, c0, cfg.approx_iters)
    # convex objective: perturbed restarts guard against a bad damping path
    for _ in range(cfg.approx_restarts):
        start = c0 + 1e-3 * (1.0 + np.abs(c0)) * rng.standard_normal(c0.size)
        c2, o2, f2 = _irls(V, fv, wv, bq, p, start, cfg.approx_iters)
        if o2 < obj:
            c, obj, flags = c2, o2, f2
    return c, flags


def best_unconstrained(f, n: int, w: JacobiWeight | None = None,
                       p: float = math.inf, grid=None,
                       cfg: _config.RunConfig | None = None) -> PolyCandidate:
    """Degree-n minimizer of the weighted p-norm of f minus the candidate."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    cfg = cfg if cfg is not None else _config.default()
    w = _resolve(w, p)
    alternation: tuple[float, ...] = ()
    if math.isinf(p):
        c, alternation, flags = _fit_sup(f, n, w, grid, cfg)
    else:
        c, flags = _fit_pnorm(f, n, w, grid, p, cfg)
    err = _certified_error(f, c, w, p, cfg)
    return PolyCandidate(degree=n,
                         coefficients=tuple(float(v) for v in c),
                         error=err,
                         alternation=alternation,
                         flags=tuple(flags),
                         grid=_grid_tag(p, cfg))


# ---------------------------------------------------------------------------
# sign-constrained fits

def _basis_derivative_matrix(pts: np.ndarray, n: int, order: int) -> np.ndarray:
    M = np.zeros((pts.size, n + 1))
    for j in range(order, n + 1):
        e = np.zeros(j + 1)
        e[j] = 1.0
        M[:, j] = _cheb.chebval(pts, _cheb.chebder(e, order))
    return M


def _constraint_rows(n: int, Y: InflectionSet, count: int):
    """Rows G with G @ c >= 0 iff the fit's curvature matches the sign layout."""
    pts = np.cos(np.linspace(math.pi, 0.0, count))
    prod = Y.sign_product(pts)
    keep = np.abs(prod) >= 1e-14
    pts = pts[keep]
    G = np.sign(prod[keep])[:, None] * _basis_derivative_matrix(pts, n, 2)
    return G, pts


def _solve_constrained(f, n, w, p, G, gpts, cfg):
    if p == 2:
        xq, bq = gauss_grid(panels=cfg.quad_panels)
        rs = np.sqrt(bq) * w(xq)
        V = _cheb.chebvander(xq, n)
        return solve_constrained_ls(V * rs[:, None], rs * _values(f, xq),
                                    np.zeros((0, n + 1)), G, gpts)
    if math.isinf(p):
        xq = np.cos(np.linspace(math.pi, 0.0, 1025))
        wv = w(xq)
        keep = wv > 1e-12
        xq, mult = xq[keep], wv[keep]
    else:
        xq, bq = gauss_grid(panels=cfg.quad_panels)
        mult = bq ** (1.0 / p) * w(xq)
    if p >= 1:
        return constrained_pnorm_fit(_cheb.chebvander(xq, n), _values(f, xq),
                                     mult, p, G)
    # p < 1: penalized coordinate descent, heuristic like the plain solver
    bq = np.ones_like(xq) if math.isinf(p) else bq
    V = _cheb.chebvander(xq, n)
    wv, fv = w(xq), _values(f, xq)
    rng = np.random.default_rng(cfg.seed)
    c = _l2_start(V, fv, wv, bq)
    base = _discrete_objective(V, fv, wv, bq, p)
    for mu in (1e2, 1e4, 1e6):
        def objective(cc, mu=mu):
            gap = np.minimum(G @ cc, 0.0)
            return base(cc) + mu * float(gap @ gap)

        from scipy.optimize import minimize
        c = minimize(objective, c, method="Nelder-Mead",
                     options={"maxiter": 200 * c.size, "fatol": 1e-12}).x
    return c, ["heuristic-nonconvex", "penalty-constraints"]


def best_coconvex(f, n: int, w: JacobiWeight | None = None,
                  p: float = math.inf, Y=None,
                  cfg: _config.RunConfig | None = None,
                  grid=None) -> PolyCandidate:
    """Degree-n fit whose curvature changes sign exactly at the points of Y.

    Y empty means plain convexity.  The unconstrained candidate is returned
    unchanged when it already satisfies the sign conditions, keeping the
    constrained error >= the unconstrained error by construction.
    """
    if Y is None:
        Y = InflectionSet()
    elif not isinstance(Y, InflectionSet):
        Y = InflectionSet(Y)
    cfg = cfg if cfg is not None else _config.default()
    base = best_unconstrained(f, n, w, p, grid=grid, cfg=cfg)
    wres = _resolve(w, p)
    flags: list[str] = []
    try:
        ok, _ = coconvexity_check(f, Y, np.linspace(-0.999, 0.999, 257))
        if not ok:
            flags.append("target-violates-constraint")
    except Exception:
        flags.append("target-constraint-uncheckable")
    G, gpts = _constraint_rows(n, Y, 16 * (Y.s + 1))
    Gv, _ = _constraint_rows(n, Y, 64 * (Y.s + 1))
    cbase = np.asarray(base.coefficients)
    union_min = min(float(np.min(G @ cbase)) if G.size else 0.0,
                    float(np.min(Gv @ cbase)) if Gv.size else 0.0)
    if union_min >= -_FEAS_SLACK:
        return dataclasses.replace(
            base,
            constraint_residual=min(0.0, union_min),
            flags=base.flags + tuple(flags) + ("constraint-inactive",))
    Gwork = G
    c = cbase
    for round_ in range(3):
        c, sflags = _solve_constrained(f, n, wres, p, Gwork, gpts, cfg)
        flags.extend(x for x in sflags if x not in flags)
        viol = Gv @ c
        if float(np.min(viol)) >= -_VALIDATION_SLACK:
            break
        Gwork = np.vstack([Gwork, Gv[viol < -1e-12]])
        if round_ == 0:
            flags.append("constraint-grid-augmented")
    residual = min(0.0, float(np.min(Gv @ c))) if Gv.size else 0.0
    err = _certified_error(f, c, wres, p, cfg)
    if err < base.error - 1e-9:
        flags.append("below-unconstrained-baseline")
    return PolyCandidate(degree=n,
                         coefficients=tuple(float(v) for v in c),
                         error=err,
                         constraint_residual=residual,
                         flags=tuple(flags),
                         grid=base.grid)


# ---------------------------------------------------------------------------
# tail comparison of the two error sequences

@dataclasses.dataclass(frozen=True)
class JacksonReport:
    """Weighted sup comparison of constrained vs plain error decay."""

    sigma: int
    m: int
    rows: tuple[tuple[int, float, float], ...]
    lhs_sup: float
    rhs_sup: float
    constant: float | None
    sentinel: str | None
    flags: tuple[str, ...]


def jackson_tail_check(f, sigma: int, m: int, n_max: int,
                       w: JacobiWeight | None = None, p: float = math.inf,
                       Y=None, allow_sigma_4: bool = False,
                       cfg: _config.RunConfig | None = None) -> JacksonReport:
    """sup-of-n^sigma comparison between constrained and plain errors.

    The constrained sup runs over n in [m, n_max], the plain one over
    [1, n_max]; the reported constant is their ratio, with a both-zero
    sentinel when numerator and denominator both vanish.
    """
    if sigma < 1 or int(sigma) != sigma:
        raise ConfigError("sigma must be a positive integer")
    if sigma == 4 and not allow_sigma_4:
        raise ConfigError(
            "sigma = 4 is excluded; pass allow_sigma_4=True to probe it")
    if m < 1 or int(m) != m:
        raise ConfigError("m must be a positive integer")
    if n_max > 14:
        raise ConfigError("n_max above 14 exceeds the desk-scale cap")
    if n_max < m:
        raise ConfigError("n_max must be >= m")
    cfg = cfg if cfg is not None else _config.default()
    flags: list[str] = []
    if sigma == 4:
        flags.append("outside-stated-hypotheses")
    rows = []
    for n in range(1, n_max + 1):
        plain = best_unconstrained(f, n, w, p, cfg=cfg)
        shaped = best_coconvex(f, n, w, p, Y, cfg=cfg)
        rows.append((n, plain.error, shaped.error))
        flags.extend(x for x in plain.flags + shaped.flags if x not in flags)
    lhs = max(n ** sigma * ce for n, _, ce in rows if n >= m)
    rhs = max(n ** sigma * e for n, e, _ in rows)
    sentinel = None
    constant: float | None
    if lhs < 1e-12 and rhs < 1e-12:
        sentinel, constant = "both-zero", None
    elif rhs < 1e-12:
        constant = math.inf
        flags.append("rhs-zero")
    else:
        constant = lhs / rhs
    return JacksonReport(sigma=int(sigma), m=int(m), rows=tuple(rows),
                         lhs_sup=lhs, rhs_sup=rhs, constant=constant,
                         sentinel=sentinel, flags=tuple(flags))
