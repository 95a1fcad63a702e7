"""Pure-numpy kernels: term-table evaluation and masked symmetric differences.

This is the fallback for the compiled extension ``dtmod._kernels``; both expose
the same three functions over the flat term-table layout described in
:mod:`dtmod.fnspace`.  Keep the two in sync.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

K_POLY = 0
K_EXP = 1
K_POWABS = 2
K_POWSGN = 3
K_POWTRUNC = 4


def eval_table(kinds, coefs, p0, p1, pool, offs, x):
    """Evaluate the term table at points ``x`` (1-d float64 array)."""
    out = np.zeros_like(x)
    for t in range(kinds.shape[0]):
        kind = kinds[t]
        c = coefs[t]
        if kind == K_POLY:
            seg = pool[offs[t]:offs[t + 1]]
            acc = np.zeros_like(x)
            for a in seg[::-1]:
                acc = acc * x + a
            out += c * acc
        elif kind == K_EXP:
            out += c * np.exp(p0[t] * x)
        elif kind == K_POWABS:
            out += c * np.abs(x - p0[t]) ** p1[t]
        elif kind == K_POWSGN:
            d = x - p0[t]
            out += c * np.sign(d) * np.abs(d) ** p1[t]
        elif kind == K_POWTRUNC:
            d = x - p0[t]
            out += c * np.where(d > 0.0, d, 0.0) ** p1[t] * (d > 0.0)
        else:  # pragma: no cover - table builder never emits other kinds
            raise ValueError(f"unknown term kind {kind}")
    return out


def diff_table(kinds, coefs, p0, p1, pool, offs, k, h, x, phi_step):
    """Masked symmetric difference of width ``k`` with step h (or h*phi(x)).

    Entries whose difference window leaves [-1, 1] are exactly zero.
    """
    x = np.asarray(x, dtype=np.float64)
    if phi_step:
        step = h * np.sqrt(np.maximum(1.0 - x * x, 0.0))
    else:
        step = np.full_like(x, h)
    half = 0.5 * k * step
    mask = (x - half >= -1.0) & (x + half <= 1.0)
    out = np.zeros_like(x)
    if not mask.any():
        return out
    xm = x[mask]
    sm = step[mask]
    acc = np.zeros_like(xm)
    for i in range(k + 1):
        sign = -1.0 if (k - i) % 2 else 1.0
        acc += sign * math.comb(k, i) * eval_table(
            kinds, coefs, p0, p1, pool, offs, xm + (0.5 * (2 * i - k)) * sm
        )
    out[mask] = acc
    return out


def phi_values(x):
    """sqrt(1 - x^2), clipped at 0 for round-off beyond the endpoints."""
    x = np.asarray(x, dtype=np.float64)
    return np.sqrt(np.maximum(1.0 - x * x, 0.0))
