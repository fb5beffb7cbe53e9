"""Dense two-phase revised simplex for equality-constrained problems.

Built for the hidden-state ensemble search: very many nonnegative variables
but only a handful of equality rows, so each iteration solves a tiny basis
system and scans reduced costs vectorized over all columns.  Entering
variables are picked by largest reduced cost; on degenerate stalls the rule
drops to Bland's lowest-index choice, which guarantees termination.  Ratio
ties always leave by lowest variable index.
"""

from __future__ import annotations

import numpy as np

from .errors import InfeasibleConstraintError, NoConvergenceError

REDUCED_COST_TOL = 1e-9
RATIO_TOL = 1e-11
FEASIBILITY_TOL = 1e-8
STALL_LIMIT = 30


class _Unbounded(Exception):
    pass


def _iterate(a, b, costs, basis, n_entering, max_iter):
    """Run simplex pivots until optimal; return (basis, x_basis).

    ``a`` is m x n_total (slack/artificial columns included), ``basis`` a
    list of m column indices, ``n_entering`` the number of leading columns
    allowed to enter.
    """
    m = a.shape[0]
    bland = False
    stall = 0
    best = -np.inf
    for _ in range(max_iter):
        bmat = a[:, basis]
        x_b = np.linalg.solve(bmat, b)
        if x_b.min() < -FEASIBILITY_TOL:
            raise NoConvergenceError(f"basis lost feasibility (min x = {x_b.min():.3e})")
        x_b = np.clip(x_b, 0.0, None)

        value = float(costs[basis] @ x_b)
        if value > best + 1e-12:
            best = value
            stall = 0
            bland = False
        else:
            stall += 1
            if stall > STALL_LIMIT:
                bland = True

        y = np.linalg.solve(bmat.T, costs[basis])
        reduced = costs[:n_entering] - y @ a[:, :n_entering]
        reduced[np.asarray(basis)[np.asarray(basis) < n_entering]] = 0.0
        improving = reduced > REDUCED_COST_TOL
        if not improving.any():
            return basis, x_b
        if bland:
            enter = int(np.flatnonzero(improving)[0])
        else:
            enter = int(np.argmax(reduced))

        direction = np.linalg.solve(bmat, a[:, enter])
        movable = direction > RATIO_TOL
        if not movable.any():
            raise _Unbounded
        ratios = np.full(m, np.inf)
        ratios[movable] = x_b[movable] / direction[movable]
        theta = ratios.min()
        candidates = np.flatnonzero(ratios <= theta + RATIO_TOL)
        leave = candidates[np.argmin([basis[k] for k in candidates])]
        basis[leave] = enter
    raise NoConvergenceError(f"simplex exceeded {max_iter} iterations")


def solve_max(costs, a, b, max_iter=20000):
    """Maximize costs @ x subject to a @ x = b, x >= 0.

    Returns (value, x).  Raises InfeasibleConstraintError if no feasible
    point exists and NoConvergenceError on iteration exhaustion.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    costs = np.asarray(costs, dtype=float)
    m, n = a.shape

    # Phase 1: flip rows to b >= 0, start from an all-artificial basis.
    flip = np.where(b < 0.0, -1.0, 1.0)
    a_ext = np.hstack([a * flip[:, None], np.eye(m)])
    b_pos = b * flip
    phase1_costs = np.concatenate([np.zeros(n), -np.ones(m)])
    basis = list(range(n, n + m))
    try:
        basis, x_b = _iterate(a_ext, b_pos, phase1_costs, basis, n + m, max_iter)
    except _Unbounded:  # cannot happen: phase-1 objective is bounded by 0
        raise NoConvergenceError("phase-1 reported unbounded")
    residual = float(sum(x_b[k] for k in range(m) if basis[k] >= n))
    if residual > FEASIBILITY_TOL:
        raise InfeasibleConstraintError(f"constraints infeasible (artificial residual {residual:.3e})")

    # Drive leftover zero-level artificials out of the basis where possible.
    for row, col in enumerate(basis):
        if col < n:
            continue
        bmat = a_ext[:, basis]
        w = np.linalg.solve(bmat.T, np.eye(m)[row])
        pivot_row = w @ a_ext[:, :n]
        pivot_row[[k for k in basis if k < n]] = 0.0
        candidates = np.flatnonzero(np.abs(pivot_row) > REDUCED_COST_TOL)
        if candidates.size:
            basis[row] = int(candidates[0])
        # else: redundant row; the artificial stays basic at zero and is
        # barred from re-entering below.

    try:
        basis, x_b = _iterate(a_ext, b_pos, np.concatenate([costs, np.zeros(m)]), basis, n, max_iter)
    except _Unbounded:
        raise NoConvergenceError("objective unbounded above on the feasible set")
    x = np.zeros(n)
    for k, col in enumerate(basis):
        if col < n:
            x[col] = x_b[k]
    return float(costs @ x), x
