"""
Best-bound branch-and-bound over binary-marked variables.

Branching picks the most fractional binary (lowest index on ties), the
0-branch is created before the 1-branch, and open nodes are ordered by
(bound, deeper first, creation order).
"""

import heapq
import itertools
import logging
import time

import numpy as np

from pshopt.errors import Infeasible, NumericalFailure, TimeBudgetExceeded
from pshopt.lp.highs import solve_highs_milp
from pshopt.lp.program import LpSolution, Status
from pshopt.lp.solve import solve_lp
from pshopt.settings import INTEGRALITY_TOL

logger = logging.getLogger(__name__)

PRUNE_TOL = 1e-9


def _most_fractional(x, binaries):
    values = x[binaries]
    distance = np.abs(values - np.round(values))
    fractional = distance > INTEGRALITY_TOL
    if not fractional.any():
        return None
    score = np.where(fractional, np.abs(values - np.floor(values) - 0.5), np.inf)
    return int(binaries[int(np.argmin(score))])


def _gap(incumbent, bound):
    if incumbent is None:
        return float('inf')
    return max(0.0, incumbent - bound) / max(1.0, abs(incumbent))


def solve_binary_mip(model, time_budget=None, backend='bnb', lp_backend=None):
    if backend == 'highs':
        return solve_highs_milp(model, time_budget)
    started = time.perf_counter()
    binaries = np.asarray(model.binary_indices(), dtype=int)
    _, _, _, _, lb0, ub0 = model.matrices()
    counter = itertools.count()

    root = solve_lp(model, backend=lp_backend)
    if root.status is Status.INFEASIBLE:
        raise Infeasible('mixed-integer model')
    if root.status is Status.UNBOUNDED:
        raise NumericalFailure("relaxation is unbounded")

    incumbent = None
    best = float('inf')
    nodes = 1
    heap = [(root.objective, 0, next(counter), lb0.copy(), ub0.copy(), root)]

    def accept(sol):
        nonlocal incumbent, best
        if sol.objective < best:
            incumbent, best = sol, sol.objective
            logger.debug("mip: incumbent %.6f after %d nodes", best, nodes)

    while heap:
        if time_budget is not None and time.perf_counter() - started > time_budget:
            raise TimeBudgetExceeded(time_budget, incumbent, _gap(best if incumbent is not None else None, heap[0][0]))
        bound, negdepth, _, lo, hi, sol = heapq.heappop(heap)
        if bound >= best - PRUNE_TOL:
            continue
        k = _most_fractional(sol.x, binaries) if len(binaries) else None
        if k is None:
            accept(sol)
            continue
        for fixed in (0.0, 1.0):
            child_lo, child_hi = lo.copy(), hi.copy()
            child_lo[k] = child_hi[k] = fixed
            child = solve_lp(model, backend=lp_backend, lower=child_lo, upper=child_hi)
            nodes += 1
            if child.status is not Status.OPTIMAL or child.objective >= best - PRUNE_TOL:
                continue
            if _most_fractional(child.x, binaries) is None:
                accept(child)
            else:
                heapq.heappush(heap, (child.objective, negdepth - 1, next(counter), child_lo, child_hi, child))

    if incumbent is None:
        raise Infeasible('mixed-integer model')
    logger.info("mip: optimum %.6f, %d nodes, %.2f s", best, nodes, time.perf_counter() - started)
    return LpSolution(Status.OPTIMAL, objective=incumbent.objective, x=incumbent.x,
                      duals=None, bound=incumbent.objective, gap=0.0, nodes=nodes)
