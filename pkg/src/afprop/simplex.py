"""Small dense two-phase simplex with Bland's rule.

Solves  max c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
Dense float64 tableau, deterministic pivoting, no degeneracy cycling (Bland).
Intended for the package's master problems and exact transport-dual solves,
all at most a few thousand rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AfpropError

PIVOT_TOL = 1e-9
RATIO_TOL = 1e-11


class SimplexError(AfpropError):
    pass


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray
    value: float
    iterations: int


def _pivot(t: np.ndarray, obj: np.ndarray, basis: np.ndarray, row: int, col: int):
    t[row] /= t[row, col]
    factors = t[:, col].copy()
    factors[row] = 0.0
    t -= np.outer(factors, t[row])
    obj -= obj[col] * t[row]
    basis[row] = col


def _reduced_costs(c_full: np.ndarray, t: np.ndarray, basis: np.ndarray) -> np.ndarray:
    obj = np.concatenate([c_full, [0.0]])
    cb = c_full[basis]
    obj -= cb @ t
    return obj


def _bland_iterate(t, obj, basis, max_iter):
    iters = 0
    ncols = t.shape[1] - 1
    while True:
        improving = obj[:ncols] > PIVOT_TOL
        if not improving.any():
            return iters, "optimal"
        enter = int(np.argmax(improving))  # lowest improving index (Bland)
        col = t[:, enter]
        rows = np.where(col > RATIO_TOL)[0]
        if rows.size == 0:
            return iters, "unbounded"
        ratios = t[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best * (1.0 + 1e-10) + 1e-15]
        leave = ties[np.argmin(basis[ties])]
        _pivot(t, obj, basis, leave, enter)
        iters += 1
        if iters > max_iter:
            raise SimplexError(f"simplex exceeded {max_iter} iterations")


def solve_lp(
    c,
    a_ub=None,
    b_ub=None,
    a_eq=None,
    b_eq=None,
    max_iter: int = 200000,
) -> LpResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    a_ub = np.zeros((0, n)) if a_ub is None else np.asarray(a_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    a_eq = np.zeros((0, n)) if a_eq is None else np.asarray(a_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq

    if m == 0:
        # only x >= 0: bounded iff c <= 0
        if np.any(c > PIVOT_TOL):
            return LpResult("unbounded", np.zeros(n), np.inf, 0)
        return LpResult("optimal", np.zeros(n), 0.0, 0)

    # rows: [A | slacks | b], slack s_i with +1 for ub rows
    body = np.zeros((m, n + m_ub + 1))
    body[:m_ub, :n] = a_ub
    body[:m_ub, n : n + m_ub] = np.eye(m_ub)
    body[:m_ub, -1] = b_ub
    body[m_ub:, :n] = a_eq
    body[m_ub:, -1] = b_eq
    neg = body[:, -1] < 0
    body[neg] *= -1.0

    # artificial variables where the slack no longer provides a basis column
    needs_art = np.ones(m, dtype=bool)
    needs_art[:m_ub] = neg[:m_ub]
    art_rows = np.where(needs_art)[0]
    n_art = art_rows.size
    ncols = n + m_ub + n_art
    t = np.zeros((m, ncols + 1))
    t[:, : n + m_ub] = body[:, :-1]
    t[:, -1] = body[:, -1]
    basis = np.zeros(m, dtype=int)
    basis[:m_ub] = np.arange(n, n + m_ub)
    for a_i, row in enumerate(art_rows):
        t[row, n + m_ub + a_i] = 1.0
        basis[row] = n + m_ub + a_i

    total_iters = 0
    if n_art:
        c_phase1 = np.zeros(ncols)
        c_phase1[n + m_ub :] = -1.0
        obj = _reduced_costs(c_phase1, t, basis)
        iters, status = _bland_iterate(t, obj, basis, max_iter)
        total_iters += iters
        if status == "unbounded":  # pragma: no cover - phase 1 is bounded
            raise SimplexError("phase 1 reported unbounded")
        if -obj[-1] < -1e-7:
            return LpResult("infeasible", np.full(n, np.nan), np.nan, total_iters)
        # drive leftover artificials out of the basis, or drop redundant rows
        keep = np.ones(m, dtype=bool)
        for row in range(m):
            if basis[row] >= n + m_ub:
                pivots = np.where(np.abs(t[row, : n + m_ub]) > PIVOT_TOL)[0]
                if pivots.size:
                    dummy = np.zeros(ncols + 1)
                    _pivot(t, dummy, basis, row, pivots[0])
                else:
                    keep[row] = False
        t = np.hstack([t[keep][:, : n + m_ub], t[keep][:, -1:]])
        basis = basis[keep]

    c_full = np.zeros(n + m_ub)
    c_full[:n] = c
    obj = _reduced_costs(c_full, t, basis)
    iters, status = _bland_iterate(t, obj, basis, max_iter)
    total_iters += iters
    if status == "unbounded":
        return LpResult("unbounded", np.full(n, np.nan), np.inf, total_iters)
    x_full = np.zeros(n + m_ub)
    x_full[basis] = t[:, -1]
    value = float(c_full @ x_full)
    return LpResult("optimal", x_full[:n], value, total_iters)
