"""Shared deterministic convex-solver plumbing for constrained fits.

Strategy: solve equality-constrained least squares directly through a
nullspace parametrization (exact, no iterative solver); only when inequality
constraints are actually violated does the problem go to cvxpy, with the
solver pinned to the first available of a fixed preference list so results
are reproducible across runs on one environment.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import InfeasibleConstraintError, NonConvergenceError

_SLACK = 1e-10


@functools.cache
def _cvxpy():
    import cvxpy as cp
    return cp


@functools.cache
def pinned_solver() -> str:
    cp = _cvxpy()
    installed = set(cp.installed_solvers())
    for name in ("CLARABEL", "ECOS", "OSQP", "SCS"):
        if name in installed:
            return name
    raise RuntimeError("no usable convex solver installed")


def _nullspace_ls(Aw: np.ndarray, bw: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Least squares min ||Aw z - bw|| subject to C z = 0."""
    if C.shape[0] == 0:
        return np.linalg.lstsq(Aw, bw, rcond=None)[0]
    from scipy.linalg import null_space
    Z = null_space(C)
    if Z.shape[1] == 0:
        return np.zeros(Aw.shape[1])
    y = np.linalg.lstsq(Aw @ Z, bw, rcond=None)[0]
    return Z @ y


def solve_constrained_ls(Aw: np.ndarray, bw: np.ndarray, C: np.ndarray,
                         G: np.ndarray, gpts=None) -> tuple[np.ndarray, list[str]]:
    """Equality-constrained LS with optional inequality rows G z >= 0.

    Returns (solution, flags).  The exact nullspace path is used whenever the
    inequalities are slack there; otherwise a QP runs on the pinned solver.
    """
    z = _nullspace_ls(Aw, bw, C)
    if G.shape[0] == 0 or float(np.min(G @ z)) >= -_SLACK:
        return z, []
    cp = _cvxpy()
    n = Aw.shape[1]
    var = cp.Variable(n)
    cons = [G @ var >= 0]
    if C.shape[0]:
        cons.append(C @ var == 0)
    prob = cp.Problem(cp.Minimize(cp.sum_squares(Aw @ var - bw)), cons)
    solver = pinned_solver()
    prob.solve(solver=solver)
    if prob.status in ("infeasible", "infeasible_inaccurate"):
        worst = []
        if gpts is not None and len(gpts) == G.shape[0]:
            viol = G @ z
            order = np.argsort(viol)
            worst = [gpts[i] for i in order[:5]]
        raise InfeasibleConstraintError(
            f"shape-constrained fit infeasible ({prob.status})", where=worst)
    if var.value is None:
        raise NonConvergenceError(f"constrained fit failed: status {prob.status}")
    flags = [f"constrained-qp:{solver.lower()}"]
    if prob.status != "optimal":
        flags.append(f"solver-status:{prob.status}")
    return np.asarray(var.value, dtype=np.float64), flags


def constrained_pnorm_fit(D: np.ndarray, y: np.ndarray, mult: np.ndarray,
                          p: float, G: np.ndarray) -> tuple[np.ndarray, list[str]]:
    """min || mult * (D c - y) ||_p subject to G c >= 0 (p >= 1 or inf)."""
    cp = _cvxpy()
    n = D.shape[1]
    var = cp.Variable(n)
    resid = cp.multiply(mult, D @ var - y)
    obj = cp.Minimize(cp.norm(resid, "inf" if np.isinf(p) else p))
    cons = [G @ var >= 0] if G.shape[0] else []
    prob = cp.Problem(obj, cons)
    solver = pinned_solver()
    prob.solve(solver=solver)
    if var.value is None:
        raise NonConvergenceError(f"constrained fit failed: status {prob.status}")
    flags = [f"constrained-fit:{solver.lower()}"]
    if prob.status != "optimal":
        flags.append(f"solver-status:{prob.status}")
    return np.asarray(var.value, dtype=np.float64), flags
