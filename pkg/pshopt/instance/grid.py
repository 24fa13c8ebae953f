import logging

import attr
import numpy as np

from pshopt.errors import GridExcludesBoundary, UnitRangeError

logger = logging.getLogger(__name__)

#: number of equal reservoir intervals of the uniform default grid
UNIFORM_RESERVOIR_INTERVALS = 10


@attr.s(frozen=True)
class GridSpec():

    #: sorted distinct reservoir levels
    reservoir_points = attr.ib(type=tuple)
    #: sorted distinct ramping-boundary values, containing 0
    ramp_points = attr.ib(type=tuple)

    def level_index(self):
        return {m: k for k, m in enumerate(self.reservoir_points)}

    def ramp_index(self):
        return {h: k for k, h in enumerate(self.ramp_points)}


def _uniform_ramp(inst):
    low = min(lo for lo, _ in inst.gen_bounds)
    points = {0.0, float(inst.gen_max)}
    if low > 0:
        points.update(np.linspace(low, inst.gen_max, 3).tolist())
    else:
        points.update(np.linspace(0.0, inst.gen_max, 4).tolist())
    return points


def _subdivide(points, k):
    """ Coarse points kept exactly; interior points at a + (b - a) * (i / k). """
    points = sorted(points)
    out = set(points)
    for a, b in zip(points[:-1], points[1:]):
        out.update(a + (b - a) * (i / k) for i in range(1, k))
    return out


def build_grid(inst, refinement=1):
    """
    Grids of the discretized event network. refinement k splits every
    reservoir interval into k equal parts; the grid for k' contains the
    grid for k whenever k divides k'.
    """
    if refinement < 1:
        raise UnitRangeError(f"grid refinement must be >= 1, got {refinement}")
    if inst.grid_reservoir is not None:
        if inst.initial_level not in inst.grid_reservoir:
            raise GridExcludesBoundary('reservoir', inst.initial_level)
        if inst.terminal_level is not None and inst.terminal_level not in inst.grid_reservoir:
            raise GridExcludesBoundary('reservoir', inst.terminal_level)
        reservoir = set(inst.grid_reservoir)
    else:
        reservoir = set(np.linspace(0.0, inst.capacity, UNIFORM_RESERVOIR_INTERVALS + 1).tolist())
    if inst.grid_ramp is not None:
        if 0.0 not in inst.grid_ramp:
            raise GridExcludesBoundary('ramp', 0.0)
        ramp = set(inst.grid_ramp)
    else:
        ramp = _uniform_ramp(inst)

    if refinement > 1:
        reservoir = _subdivide(reservoir, refinement)
    reservoir.add(inst.initial_level)
    if inst.terminal_level is not None:
        reservoir.add(inst.terminal_level)
    if min(reservoir) < 0 or max(reservoir) > inst.capacity:
        raise UnitRangeError("reservoir grid points must lie in [0, capacity]")
    if min(ramp) < 0 or max(ramp) > inst.gen_max:
        raise UnitRangeError("ramp grid points must lie in [0, max generation]")
    grid = GridSpec(tuple(sorted(reservoir)), tuple(sorted(ramp)))
    logger.debug("grid k=%d: %d reservoir points, %d ramp points",
                 refinement, len(grid.reservoir_points), len(grid.ramp_points))
    return grid
