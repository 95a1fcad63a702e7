"""Function catalog, Jacobi weights, and partition types.

Everything downstream consumes these three families:

* :class:`FunctionExpr` — symbolic-rule expressions on [-1, 1] built from a
  small closed catalog (polynomials, exponentials, centered absolute powers,
  truncated powers, sums, scalar multiples).  Derivatives are exact rewrite
  rules, never finite differences, because the moduli need high derivative
  orders of the test functions with full accuracy.
* :class:`JacobiWeight` — (1+x)^alpha (1-x)^beta with admissibility depending
  on the norm index p.
* :class:`PartitionSet` / :class:`InflectionSet` — node sequences on [-1, 1]
  (general, Chebyshev, uniform, merged) and interior sign-change sets.

All types are immutable values after construction.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .errors import ConfigError, InadmissibleWeightError, SmoothnessError

__all__ = [
    "FunctionExpr",
    "JacobiWeight",
    "PartitionSet",
    "InflectionSet",
    "catalog_lookup",
    "from_json",
    "parse_inline",
    "make_jacobi_weight",
    "chebyshev_partition",
    "uniform_partition",
    "merge_partitions",
    "mesh_norm",
    "phi",
]

_K_POLY = 0
_K_EXP = 1
_K_POWABS = 2
_K_POWSGN = 3
_K_POWTRUNC = 4

_INT_TOL = 1e-12


def phi(x):
    """sqrt(1 - x^2) on [-1, 1], the step-scaling factor used everywhere."""
    scalar = np.isscalar(x)
    out = _backend.phi_values(np.atleast_1d(np.asarray(x, dtype=np.float64)))
    return float(out[0]) if scalar else out


def _is_int(g: float) -> bool:
    return abs(g - round(g)) < _INT_TOL


_INF = math.inf


def _term_orders(kind: int, gamma: float) -> tuple[float, float]:
    """(smoothness, max_derivative_order) contributed by a single term.

    Smoothness counts continuous derivatives; max order counts derivatives
    representable pointwise (a jump like sign(x-c) is representable, its
    derivative is not).
    """
    if kind in (_K_POLY, _K_EXP):
        return _INF, _INF
    if kind == _K_POWABS:
        if _is_int(gamma):
            g = round(gamma)
            if g % 2 == 0:
                return _INF, _INF
            return g - 1, g
        return math.floor(gamma), math.floor(gamma)
    if kind == _K_POWSGN:
        if _is_int(gamma):
            g = round(gamma)
            if g % 2 == 1:
                return _INF, _INF
            if g == 0:
                return -1, 0
            return g - 1, g
        return math.floor(gamma), math.floor(gamma)
    if kind == _K_POWTRUNC:
        g = round(gamma)
        if g == 0:
            return -1, 0
        return g - 1, g
    raise ValueError(f"unknown kind {kind}")


class FunctionExpr:
    """Immutable symbolic function on [-1, 1] with exact derivative rules.

    Attributes
    ----------
    label : str
        Display name, used in reports and CSV rows.
    smoothness : float
        Largest r with f^(r) defined and continuous everywhere on [-1, 1]
        (``math.inf`` for analytic kinds).
    max_derivative_order : float
        Largest r for which ``derivative(r)`` is representable pointwise.
    """

    __slots__ = ("label", "tree", "smoothness", "max_derivative_order",
                 "_kinds", "_coefs", "_p0", "_p1", "_pool", "_offs", "_dcache")

    def __init__(self, terms: Sequence[tuple], label: str, tree=None):
        # terms: (kind, coef, p0, p1, poly_coeffs) with zero-coef terms dropped
        kept = [t for t in terms if t[1] != 0.0]
        self._kinds = np.array([t[0] for t in kept], dtype=np.int64)
        self._coefs = np.array([t[1] for t in kept], dtype=np.float64)
        self._p0 = np.array([t[2] for t in kept], dtype=np.float64)
        self._p1 = np.array([t[3] for t in kept], dtype=np.float64)
        pool: list[float] = []
        offs = [0]
        for t in kept:
            pool.extend(t[4])
            offs.append(len(pool))
        self._pool = np.array(pool, dtype=np.float64)
        self._offs = np.array(offs, dtype=np.int64)
        self.label = label
        self.tree = tree
        sm, mo = _INF, _INF
        for t in kept:
            s, m = _term_orders(t[0], t[3])
            sm, mo = min(sm, s), min(mo, m)
        self.smoothness = sm
        self.max_derivative_order = mo
        self._dcache: dict[int, FunctionExpr] = {}

    # -- evaluation ---------------------------------------------------------

    def eval(self, x, order: int = 0):
        """Evaluate f^(order) at scalar or array ``x``."""
        g = self.derivative(order) if order else self
        scalar = np.isscalar(x)
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = _backend.eval_table(g._kinds, g._coefs, g._p0, g._p1,
                                  g._pool, g._offs, xv)
        return float(out[0]) if scalar else out

    def __call__(self, x):
        return self.eval(x)

    # -- differentiation ----------------------------------------------------

    def derivative(self, order: int = 1) -> "FunctionExpr":
        """Exact derivative of the given order (cached)."""
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if order == 0:
            return self
        if order > self.max_derivative_order:
            raise SmoothnessError(
                f"{self.label}: derivative order {order} exceeds the "
                f"representable order {self.max_derivative_order}",
                condition="smoothness-deficit",
            )
        cached = self._dcache.get(order)
        if cached is None:
            base = self.derivative(order - 1) if order > 1 else self
            cached = base._differentiate_once()
            self._dcache[order] = cached
        return cached

    def _differentiate_once(self) -> "FunctionExpr":
        terms = []
        for t in range(self._kinds.shape[0]):
            kind = int(self._kinds[t])
            c = float(self._coefs[t])
            a, g = float(self._p0[t]), float(self._p1[t])
            if kind == _K_POLY:
                seg = self._pool[self._offs[t]:self._offs[t + 1]]
                if len(seg) > 1:
                    dseg = [j * seg[j] for j in range(1, len(seg))]
                    terms.append((_K_POLY, c, 0.0, 0.0, dseg))
            elif kind == _K_EXP:
                terms.append((_K_EXP, c * a, a, 0.0, []))
            elif kind == _K_POWABS:
                if _is_int(g) and round(g) == 0:
                    continue  # constant term
                if g < 1.0 - _INT_TOL:
                    raise SmoothnessError(
                        f"{self.label}: |x-c|^{g} has no bounded derivative",
                        condition="smoothness-deficit")
                terms.append((_K_POWSGN, c * g, a, g - 1.0, []))
            elif kind == _K_POWSGN:
                if _is_int(g) and round(g) == 0:
                    raise SmoothnessError(
                        f"{self.label}: sign factor admits no further derivative",
                        condition="smoothness-deficit")
                if g < 1.0 - _INT_TOL:
                    raise SmoothnessError(
                        f"{self.label}: sgn(x-c)|x-c|^{g} has no bounded derivative",
                        condition="smoothness-deficit")
                terms.append((_K_POWABS, c * g, a, g - 1.0, []))
            elif kind == _K_POWTRUNC:
                if round(g) == 0:
                    raise SmoothnessError(
                        f"{self.label}: truncated-power jump admits no further "
                        "derivative", condition="smoothness-deficit")
                terms.append((_K_POWTRUNC, c * g, a, g - 1.0, []))
        return FunctionExpr(terms, label=f"{self.label}'", tree=None)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        """JSON-able tree for catalog-built expressions."""
        if self.tree is None:
            raise ValueError(f"{self.label}: no serializable construction tree")
        return self.tree

    def __repr__(self):
        return f"FunctionExpr({self.label!r})"

    # internal: raw table handles for the backend kernels
    def _table(self):
        return (self._kinds, self._coefs, self._p0, self._p1,
                self._pool, self._offs)


# -- catalog ---------------------------------------------------------------


def _build_poly(params) -> list[tuple]:
    coeffs = [float(c) for c in params]
    if not coeffs:
        raise ConfigError("poly needs at least one coefficient")
    return [(_K_POLY, 1.0, 0.0, 0.0, coeffs)]


def _build_exp(params) -> list[tuple]:
    if len(params) != 1:
        raise ConfigError("exp takes exactly one parameter (the rate)")
    return [(_K_EXP, 1.0, float(params[0]), 0.0, [])]


def _build_abspow(params) -> list[tuple]:
    if len(params) != 2:
        raise ConfigError("abspow takes (center, gamma)")
    c, g = float(params[0]), float(params[1])
    if g <= 0:
        raise ConfigError(f"abspow exponent must be positive, got {g}")
    return [(_K_POWABS, 1.0, c, g, [])]


def _build_truncpow(params) -> list[tuple]:
    if len(params) != 2:
        raise ConfigError("truncpow takes (center, m)")
    c, m = float(params[0]), float(params[1])
    if not _is_int(m) or round(m) < 1:
        raise ConfigError(f"truncpow exponent must be an integer >= 1, got {m}")
    return [(_K_POWTRUNC, 1.0, c, float(round(m)), [])]


_CATALOG = {"poly": _build_poly, "exp": _build_exp,
            "abspow": _build_abspow, "truncpow": _build_truncpow}


def catalog_lookup(name: str, params: Sequence[float] = (),
                   children: Sequence[FunctionExpr] = (),
                   label: str | None = None) -> FunctionExpr:
    """Build a catalog function.

    Leaf kinds: ``poly`` (ascending coefficients), ``exp`` (rate a for
    e^{a x}), ``abspow`` (center c, exponent gamma > 0 for |x-c|^gamma),
    ``truncpow`` (center c, integer m >= 1 for (x-c)_+^m).  Composites:
    ``scale`` (one parameter, one child) and ``sum`` (children only).
    """
    params = list(params)
    child_trees = [ch.tree for ch in children]
    tree = (None if any(t is None for t in child_trees)
            else {"kind": name, "params": params, "children": child_trees})
    if name == "sum":
        if params:
            raise ConfigError("sum takes no parameters")
        if not children:
            raise ConfigError("sum needs at least one child")
        terms = []
        for ch in children:
            terms.extend(_expr_terms(ch))
        lab = label or "+".join(ch.label for ch in children)
        return FunctionExpr(terms, label=lab, tree=tree)
    if name == "scale":
        if len(params) != 1 or len(children) != 1:
            raise ConfigError("scale takes one parameter and one child")
        c = float(params[0])
        terms = [(k, c * cf, a, g, seg) for (k, cf, a, g, seg)
                 in _expr_terms(children[0])]
        lab = label or f"{c}*{children[0].label}"
        return FunctionExpr(terms, label=lab, tree=tree)
    builder = _CATALOG.get(name)
    if builder is None:
        raise ConfigError(f"unknown catalog function {name!r}")
    if children:
        raise ConfigError(f"{name} takes no children")
    lab = label or f"{name}:{','.join(_fmt_num(p) for p in params)}"
    return FunctionExpr(builder(params), label=lab, tree=tree)


def _expr_terms(expr: FunctionExpr) -> list[tuple]:
    out = []
    for t in range(expr._kinds.shape[0]):
        seg = list(expr._pool[expr._offs[t]:expr._offs[t + 1]])
        out.append((int(expr._kinds[t]), float(expr._coefs[t]),
                    float(expr._p0[t]), float(expr._p1[t]), seg))
    return out


def _fmt_num(v) -> str:
    f = float(v)
    return str(int(f)) if _is_int(f) else repr(f)


def from_json(obj) -> FunctionExpr:
    """Build an expression from the JSON schema {kind, params, children}."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad function JSON: {exc}") from exc
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("function JSON must be an object with a 'kind' key")
    children = [from_json(ch) for ch in obj.get("children", [])]
    return catalog_lookup(obj["kind"], obj.get("params", []), children,
                          label=obj.get("label"))


def parse_inline(text: str) -> FunctionExpr:
    """Parse the CLI mini-language: ``name:p1,p2,...`` or ``@file.json``."""
    text = text.strip()
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                return from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read function file {text[1:]}: {exc}") from exc
    name, _, rest = text.partition(":")
    params: list[float] = []
    if rest:
        try:
            params = [float(tok) for tok in rest.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad numeric parameter in {text!r}") from exc
    return catalog_lookup(name, params)


# -- Jacobi weights --------------------------------------------------------


class JacobiWeight:
    """(1+x)^alpha (1-x)^beta; positive on (-1, 1) and equal to 1 at x=0."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha: float, beta: float):
        self.alpha = float(alpha)
        self.beta = float(beta)

    def admissible_for(self, p: float) -> bool:
        """Exponent admissibility: [0, inf) at p=inf, (-1/p, inf) otherwise."""
        if math.isinf(p):
            return self.alpha >= 0 and self.beta >= 0
        return self.alpha > -1.0 / p and self.beta > -1.0 / p

    def __call__(self, x):
        scalar = np.isscalar(x)
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        with np.errstate(divide="ignore"):
            out = (1.0 + xv) ** self.alpha * (1.0 - xv) ** self.beta
        return float(out[0]) if scalar else out

    def shifted(self, da: float, db: float) -> "JacobiWeight":
        return JacobiWeight(self.alpha + da, self.beta + db)

    @property
    def is_unit(self) -> bool:
        return self.alpha == 0.0 and self.beta == 0.0

    def __repr__(self):
        return f"JacobiWeight(alpha={self.alpha}, beta={self.beta})"


def make_jacobi_weight(alpha: float, beta: float, p: float) -> JacobiWeight:
    """Construct a weight, enforcing exponent admissibility for the index p."""
    w = JacobiWeight(alpha, beta)
    if not w.admissible_for(p):
        if math.isinf(p):
            bad = "alpha" if alpha < 0 else "beta"
            rng = "[0, inf) at p=inf"
        else:
            bad = "alpha" if alpha <= -1.0 / p else "beta"
            rng = f"(-1/p, inf) = ({-1.0 / p}, inf) at p={p}"
        raise InadmissibleWeightError(
            f"exponent {bad} outside the admissible range {rng}",
            condition="inadmissible-weight")
    return w


# -- partitions ------------------------------------------------------------


class PartitionSet:
    """Ordered node sequence x_0 = -1 < ... < x_N = 1 with a kind tag.

    ``node_at`` clamps out-of-range indices (j <= 0 gives -1, j >= N gives 1),
    which lets window accessors near the ends avoid special cases.
    """

    __slots__ = ("nodes", "kind", "eta")

    def __init__(self, nodes: Iterable[float], kind: str = "general",
                 eta: int | None = None):
        arr = np.asarray(sorted(float(v) for v in nodes), dtype=np.float64)
        if arr.size < 2:
            raise ValueError("a partition needs at least two nodes")
        if abs(arr[0] + 1.0) > 1e-12 or abs(arr[-1] - 1.0) > 1e-12:
            raise ValueError("partition must span [-1, 1]")
        arr[0], arr[-1] = -1.0, 1.0
        if np.any(np.diff(arr) <= 0):
            raise ValueError("partition nodes must be strictly increasing")
        self.nodes = arr
        self.kind = kind
        self.eta = eta

    @property
    def intervals(self) -> int:
        return self.nodes.size - 1

    def node_at(self, j: int) -> float:
        if j <= 0:
            return -1.0
        if j >= self.nodes.size - 1:
            return 1.0
        return float(self.nodes[j])

    def interval(self, j: int) -> tuple[float, float]:
        """j-th interval, j = 1..N, counted from -1."""
        if not 1 <= j <= self.intervals:
            raise IndexError(f"interval index {j} outside 1..{self.intervals}")
        return float(self.nodes[j - 1]), float(self.nodes[j])

    def window(self, j: int, back: int = 1, fwd: int = 1) -> tuple[float, float]:
        """Clamped node window [node_at(j-back), node_at(j+fwd)]."""
        return self.node_at(j - back), self.node_at(j + fwd)

    def neighbor_sharp(self, j: int) -> float:
        """Next node (offset +1), clamped."""
        return self.node_at(j + 1)

    def neighbor_star(self, j: int) -> float:
        """Second node back (offset -2), clamped."""
        return self.node_at(j - 2)

    def gaps(self) -> np.ndarray:
        return np.diff(self.nodes)

    def __len__(self):
        return self.nodes.size

    def __repr__(self):
        return f"PartitionSet(kind={self.kind!r}, nodes={self.nodes.size})"


def chebyshev_partition(eta: int) -> PartitionSet:
    """Nodes -cos(j*pi/eta) for j = 0..eta."""
    if eta < 1:
        raise ValueError("eta must be a positive integer")
    j = np.arange(eta + 1)
    return PartitionSet(-np.cos(j * np.pi / eta), kind="chebyshev", eta=eta)


def uniform_partition(n: int) -> PartitionSet:
    if n < 1:
        raise ValueError("need at least one interval")
    return PartitionSet(np.linspace(-1.0, 1.0, n + 1), kind="uniform")


def merge_partitions(a: PartitionSet, b: PartitionSet) -> PartitionSet:
    """Union of node sets (deduplicated within 1e-14)."""
    merged = np.concatenate([a.nodes, b.nodes])
    merged.sort()
    keep = np.concatenate([[True], np.diff(merged) > 1e-14])
    return PartitionSet(merged[keep], kind="merged")


def mesh_norm(part: PartitionSet) -> float:
    """Largest consecutive gap."""
    return float(np.max(part.gaps()))


class InflectionSet:
    """Interior sign-change points, stored decreasing: 1 > y_1 > ... > y_s > -1.

    The augmented sequence prepends 1 and appends -1.  ``sign_product``
    evaluates prod_i (x - y_i), whose sign pattern encodes where a coconvex
    function must be convex (positive product) or concave.
    """

    __slots__ = ("points",)

    def __init__(self, points: Iterable[float] = ()):
        pts = sorted((float(v) for v in points), reverse=True)
        if any(not -1.0 < v < 1.0 for v in pts):
            raise ValueError("inflection points must lie strictly inside (-1, 1)")
        if any(abs(a - b) < 1e-12 for a, b in zip(pts, pts[1:])):
            raise ValueError("inflection points must be distinct")
        self.points = np.asarray(pts, dtype=np.float64)

    @property
    def s(self) -> int:
        return self.points.size

    def augmented(self) -> np.ndarray:
        return np.concatenate([[1.0], self.points, [-1.0]])

    def sign_product(self, x):
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.ones_like(xv)
        for y in self.points:
            out *= xv - y
        return float(out[0]) if np.isscalar(x) else out

    def __repr__(self):
        return f"InflectionSet({list(self.points)!r})"
