"""
Adapters to the HiGHS solvers shipped with scipy.
"""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from pshopt.errors import Infeasible, NumericalFailure, TimeBudgetExceeded
from pshopt.lp.program import LpSolution, Status

logger = logging.getLogger(__name__)


def _split(A, senses, rhs):
    le, ge, eq = senses == '<=', senses == '>=', senses == '='
    A_ub = b_ub = A_eq = b_eq = None
    if le.any() or ge.any():
        A_ub = sp.vstack([A[np.flatnonzero(le)], -A[np.flatnonzero(ge)]]).tocsr()
        b_ub = np.concatenate([rhs[le], -rhs[ge]])
    if eq.any():
        A_eq = A[np.flatnonzero(eq)]
        b_eq = rhs[eq]
    return A_ub, b_ub, A_eq, b_eq, le, ge, eq


def _linprog(c, A_ub, b_ub, A_eq, b_eq, bounds, presolve=True):
    return linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                   method='highs', options={'presolve': presolve})


def _duals(res, le, ge, eq):
    duals = np.zeros(len(le))
    try:
        ineq = np.asarray(res.ineqlin.marginals) if res.ineqlin is not None else np.zeros(0)
        n_le = int(le.sum())
        duals[le] = ineq[:n_le]
        duals[ge] = -ineq[n_le:]
        if eq.any():
            duals[eq] = np.asarray(res.eqlin.marginals)
    except (AttributeError, TypeError, ValueError):
        return None
    return duals


def solve_highs(model, lower=None, upper=None):
    c, A, senses, rhs, lb, ub = model.matrices()
    lb = lb if lower is None else lower
    ub = ub if upper is None else upper
    if np.any(lb > ub):
        return LpSolution(Status.INFEASIBLE)
    bounds = np.column_stack([lb, ub])
    A_ub, b_ub, A_eq, b_eq, le, ge, eq = _split(A, senses, rhs)
    res = _linprog(c, A_ub, b_ub, A_eq, b_eq, bounds)
    if res.status not in (0, 2, 3):
        logger.debug("HiGHS status %d (%s), re-solving without presolve", res.status, res.message)
        res = _linprog(c, A_ub, b_ub, A_eq, b_eq, bounds, presolve=False)
    if res.status == 0:
        return LpSolution(Status.OPTIMAL, objective=float(res.fun), x=np.asarray(res.x, dtype=float),
                          duals=_duals(res, le, ge, eq))
    if res.status == 2:
        return LpSolution(Status.INFEASIBLE)
    if res.status == 3:
        return LpSolution(Status.UNBOUNDED)
    # unbounded-or-infeasible: decide feasibility with a zero objective
    feasibility = _linprog(np.zeros_like(c), A_ub, b_ub, A_eq, b_eq, bounds, presolve=False)
    if feasibility.status == 0:
        return LpSolution(Status.UNBOUNDED)
    if feasibility.status == 2:
        return LpSolution(Status.INFEASIBLE)
    raise NumericalFailure(res.message)


def solve_highs_milp(model, time_budget=None):
    c, A, senses, rhs, lb, ub = model.matrices()
    integrality = np.asarray(model.binary, dtype=int)
    constraints = None
    if A.shape[0]:
        lo = np.where(senses == '<=', -np.inf, rhs).astype(float)
        hi = np.where(senses == '>=', np.inf, rhs).astype(float)
        constraints = LinearConstraint(A, lo, hi)
    options = {'mip_rel_gap': 1e-9}
    if time_budget is not None:
        options['time_limit'] = float(time_budget)
    res = milp(c, integrality=integrality, bounds=Bounds(lb, ub), constraints=constraints, options=options)
    gap = getattr(res, 'mip_gap', None)
    bound = getattr(res, 'mip_dual_bound', None)
    if res.status == 0:
        return LpSolution(Status.OPTIMAL, objective=float(res.fun), x=np.asarray(res.x, dtype=float),
                          bound=bound, gap=0.0 if gap is None else float(gap),
                          nodes=int(getattr(res, 'mip_node_count', 0) or 0))
    if res.status == 1:
        incumbent = None
        if res.x is not None:
            incumbent = LpSolution(Status.OPTIMAL, objective=float(res.fun), x=np.asarray(res.x, dtype=float),
                                   bound=bound, gap=gap)
        raise TimeBudgetExceeded(time_budget, incumbent, float('inf') if gap is None else float(gap))
    if res.status == 2:
        raise Infeasible('mixed-integer model')
    raise NumericalFailure(res.message)
