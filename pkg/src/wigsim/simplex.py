"""Dense two-phase simplex for the small power-control LPs.

Solves   minimize c.x   s.t.  A x >= b,  0 <= x <= upper
with Bland's entering/leaving rule throughout (anti-cycling) and an
iteration cap of 10 * (rows + columns) per phase. Problems here have at
most a few dozen variables, so a dense tableau is the right tool.
"""

from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-12
FEAS_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration_limit"


def _pivot(tableau, row, col):
    pr = tableau[row] / tableau[row, col]
    colvals = tableau[:, col].copy()
    tableau -= np.outer(colvals, pr)
    tableau[row] = pr


def _run_simplex(tableau, basis, cap):
    """Minimize the objective encoded in the last tableau row (reduced costs).

    Bland: entering = lowest-index column with negative reduced cost;
    leaving = min-ratio row, ties to the lowest basis index.
    """
    n_cols = tableau.shape[1] - 1
    for _ in range(cap):
        reduced = tableau[-1, :n_cols]
        eligible = reduced < -PIVOT_TOL
        if not eligible.any():
            return OPTIMAL
        col = int(np.argmax(eligible))

        column = tableau[:-1, col]
        positive = column > PIVOT_TOL
        if not positive.any():
            # Unbounded direction; cannot happen with box constraints intact.
            return INFEASIBLE
        ratios = np.full(column.shape, np.inf)
        ratios[positive] = tableau[:-1, -1][positive] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best * (1 + 1e-12) + 1e-300)
        row = int(min(ties, key=lambda r: basis[r]))

        _pivot(tableau, row, col)
        basis[row] = col
    return ITERATION_LIMIT


def solve_lp(costs, a_ge, b_ge, upper):
    """Two-phase solve; returns (status, x).

    a_ge/b_ge hold the >=-constraints; every variable gets bounds
    [0, upper[j]]. Callers are expected to pre-scale rows to O(1) entries.
    """
    costs = np.asarray(costs, dtype=np.float64)
    a_ge = np.asarray(a_ge, dtype=np.float64).reshape(len(b_ge), -1) if len(b_ge) else \
        np.zeros((0, costs.size))
    b_ge = np.asarray(b_ge, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    n = costs.size
    m = b_ge.size
    if n == 0:
        return OPTIMAL, np.zeros(0)

    # Rows with b <= 0 are satisfied at x = 0: negate so the surplus column
    # itself is basic and no artificial is needed.
    flip = b_ge <= 0
    art_rows = np.flatnonzero(~flip)
    n_art = art_rows.size

    rows = m + n
    cols = n + m + n + n_art      # x | surplus | ub slack | artificial
    tab = np.zeros((rows + 1, cols + 1))
    basis = np.empty(rows, dtype=np.int64)

    art_of_row = {int(r): n + m + n + k for k, r in enumerate(art_rows)}
    for i in range(m):
        sign = -1.0 if flip[i] else 1.0
        tab[i, :n] = sign * a_ge[i]
        tab[i, n + i] = -sign          # a.x - s = b
        tab[i, -1] = sign * b_ge[i]
        if flip[i]:
            basis[i] = n + i
        else:
            tab[i, art_of_row[i]] = 1.0
            basis[i] = art_of_row[i]
    for j in range(n):
        r = m + j
        tab[r, j] = 1.0
        tab[r, n + m + j] = 1.0        # x + t = upper
        tab[r, -1] = upper[j]
        basis[r] = n + m + j

    cap = 10 * (rows + cols)

    # Phase 1: minimize the artificial sum.
    tab[-1, :] = 0.0
    tab[-1, n + m + n:n + m + n + n_art] = 1.0
    for i in art_rows:
        tab[-1, :] -= tab[i, :]
    status = _run_simplex(tab, basis, cap)
    if status != OPTIMAL:
        return status, None
    if -tab[-1, -1] > FEAS_TOL * max(1.0, np.abs(b_ge).max() if m else 1.0):
        return INFEASIBLE, None

    # Pivot leftover artificials out of the basis; rows that cannot be
    # pivoted are redundant and harmless (they stay at zero) once the
    # artificial columns are frozen out of phase 2.
    art_lo = n + m + n
    for r in range(rows):
        if basis[r] >= art_lo:
            row_coeffs = np.abs(tab[r, :art_lo])
            cand = np.flatnonzero(row_coeffs > PIVOT_TOL)
            if cand.size:
                _pivot(tab, r, int(cand[0]))
                basis[r] = int(cand[0])

    # Phase 2: restore the real objective over the original columns.
    tab[:, art_lo:art_lo + n_art] = 0.0   # freeze artificials at zero
    tab[-1, :] = 0.0
    tab[-1, :n] = costs
    for r in range(rows):
        if basis[r] < n and costs[basis[r]] != 0.0:
            tab[-1, :] -= costs[basis[r]] * tab[r, :]
    status = _run_simplex(tab, basis, cap)
    if status != OPTIMAL:
        return status, None

    x = np.zeros(n)
    for r in range(rows):
        if basis[r] < n:
            x[basis[r]] = tab[r, -1]
    np.clip(x, 0.0, upper, out=x)
    return OPTIMAL, x
