"""
Dense two-phase revised simplex.

Small reference backend: bounds are moved into the standard form
(shifts, sign flips, free-variable splits, explicit upper-bound rows),
phase I minimizes the artificial sum, phase II the real objective.
Pricing is Dantzig's rule and falls back to Bland's rule after a run
of degenerate pivots.
"""

import logging
import math

import numpy as np

from pshopt.errors import NumericalFailure
from pshopt.lp.program import LpSolution, Status
from pshopt.settings import FEAS_TOL

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
#: consecutive degenerate pivots before switching to Bland's rule
DEGENERATE_LIMIT = 50
MAX_ITERATIONS = 50000


class _StandardForm():
    """ min c'x' s.t. A'x' = b', x' >= 0 with x = offset + T x'. """

    def __init__(self, c, A, senses, rhs, lb, ub):
        n = len(c)
        A = np.asarray(A.toarray() if hasattr(A, 'toarray') else A, dtype=float)
        m0 = A.shape[0]
        columns = []
        self.offset = np.zeros(n)
        upper_rows = []
        for k in range(n):
            if math.isfinite(lb[k]):
                self.offset[k] = lb[k]
                columns.append((k, 1.0))
                if math.isfinite(ub[k]):
                    upper_rows.append((len(columns) - 1, ub[k] - lb[k]))
            elif math.isfinite(ub[k]):
                self.offset[k] = ub[k]
                columns.append((k, -1.0))
            else:
                columns.append((k, 1.0))
                columns.append((k, -1.0))
        N = len(columns)
        self.T = np.zeros((n, N))
        for j, (k, s) in enumerate(columns):
            self.T[k, j] = s

        slack_rows = [i for i in range(m0) if senses[i] != '=']
        m = m0 + len(upper_rows)
        n_slack = len(slack_rows) + len(upper_rows)
        self.n_structural = N
        self.A = np.zeros((m, N + n_slack))
        self.A[:m0, :N] = A @ self.T
        self.b = np.zeros(m)
        self.b[:m0] = rhs - A @ self.offset
        s = N
        for i in slack_rows:
            self.A[i, s] = 1.0 if senses[i] == '<=' else -1.0
            s += 1
        for r, (j, width) in enumerate(upper_rows):
            self.A[m0 + r, j] = 1.0
            self.A[m0 + r, s] = 1.0
            self.b[m0 + r] = width
            s += 1
        self.c = np.zeros(N + n_slack)
        self.c[:N] = c @ self.T
        self.flip = np.where(self.b < 0, -1.0, 1.0)
        self.A *= self.flip[:, None]
        self.b *= self.flip
        self.m0 = m0

    def recover(self, xs):
        return self.offset + self.T @ xs[:self.n_structural]


def _iterate(A, b, c, basis, max_iterations):
    m = A.shape[0]
    bland = False
    degenerate = 0
    for it in range(max_iterations):
        B = A[:, basis]
        try:
            xb = np.linalg.solve(B, b)
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError:
            raise NumericalFailure("singular basis")
        d = c - A.T @ y
        d[basis] = 0.0
        candidates = np.flatnonzero(d < -COST_TOL)
        if not candidates.size:
            return 'optimal', basis, xb, y
        entering = candidates[0] if bland else candidates[np.argmin(d[candidates])]
        u = np.linalg.solve(B, A[:, entering])
        positive = u > PIVOT_TOL
        if not positive.any():
            return 'unbounded', basis, xb, y
        ratios = np.full(m, np.inf)
        ratios[positive] = np.maximum(xb[positive], 0.0) / u[positive]
        theta = ratios.min()
        ties = np.flatnonzero(ratios <= theta + 1e-12)
        if bland:
            leaving = ties[np.argmin(np.asarray(basis)[ties])]
        else:
            leaving = ties[np.argmax(u[ties])]
        if theta <= 1e-12:
            degenerate += 1
            if degenerate >= DEGENERATE_LIMIT and not bland:
                logger.debug("simplex: %d degenerate pivots, switching to Bland's rule", degenerate)
                bland = True
        else:
            degenerate = 0
        basis[leaving] = int(entering)
    raise NumericalFailure(f"iteration limit {max_iterations} reached")


def solve_simplex(model, lower=None, upper=None, max_iterations=MAX_ITERATIONS):
    c, A, senses, rhs, lb, ub = model.matrices()
    lb = lb if lower is None else lower
    ub = ub if upper is None else upper
    if np.any(lb > ub):
        return LpSolution(Status.INFEASIBLE)
    form = _StandardForm(c, A, senses, rhs, lb, ub)
    m, n = form.A.shape
    if m == 0:
        if np.any(form.c < -COST_TOL):
            return LpSolution(Status.UNBOUNDED)
        x = form.recover(np.zeros(n))
        return LpSolution(Status.OPTIMAL, objective=float(c @ x), x=x)

    # phase I
    A1 = np.hstack([form.A, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    status, basis, xb, _ = _iterate(A1, form.b, c1, basis, max_iterations)
    infeasibility = float(sum(xb[r] for r, k in enumerate(basis) if k >= n))
    if infeasibility > FEAS_TOL * max(1.0, float(np.max(np.abs(form.b)))):
        return LpSolution(Status.INFEASIBLE)

    # drive artificials out of the basis, dropping redundant rows
    keep = list(range(m))
    B_inv = np.linalg.inv(A1[:, basis])
    for r in range(m):
        if basis[r] < n:
            continue
        row = B_inv[r] @ form.A
        nonbasic = [k for k in range(n) if k not in basis and abs(row[k]) > PIVOT_TOL]
        if nonbasic:
            basis[r] = nonbasic[0]
            B_inv = np.linalg.inv(A1[:, basis])
        else:
            keep.remove(r)
    A2 = form.A[keep]
    b2 = form.b[keep]
    basis = [basis[r] for r in keep]

    # phase II
    status, basis, xb, y = _iterate(A2, b2, form.c, basis, max_iterations)
    if status == 'unbounded':
        return LpSolution(Status.UNBOUNDED)
    xs = np.zeros(n)
    xs[basis] = xb
    x = form.recover(xs)
    duals = np.zeros(form.m0)
    for pos, r in enumerate(keep):
        if r < form.m0:
            duals[r] = y[pos] * form.flip[r]
    return LpSolution(Status.OPTIMAL, objective=float(c @ x), x=x, duals=duals)
