import logging

from pshopt.errors import ValidationFailed

logger = logging.getLogger(__name__)


def validate(inst):
    """
    Report violations of the instance invariants; an empty list means
    the instance is well-formed. Convexity of the piecewise costs needs
    no check: a maximum over affine pieces is convex by construction.
    """
    report = []
    T = inst.horizon
    if T < 1:
        report.append("horizon must be >= 1")
    for name in ('prices', 'efficiency_gen', 'efficiency_pump', 'inflow',
                 'spillage', 'startup', 'shutdown', 'gen_bounds', 'pump_bounds',
                 'gen_cost_pieces', 'pump_cost_pieces'):
        if len(getattr(inst, name)) != T:
            report.append(f"{name} must have {T} entries")
    for t, (lo, hi) in enumerate(inst.gen_bounds, 1):
        if not 0 <= lo <= hi:
            report.append(f"generation bounds at stage {t} must satisfy 0 <= lower <= upper")
    for t, (lo, hi) in enumerate(inst.pump_bounds, 1):
        if not 0 <= lo <= hi:
            report.append(f"pumping bounds at stage {t} must satisfy 0 <= lower <= upper")
    if inst.ramp_limit <= 0:
        report.append("ramp limit must be > 0")
    if inst.capacity <= 0:
        report.append("reservoir capacity must be > 0")
    if inst.initial_level < 0:
        report.append("initial level must be >= 0")
    if inst.initial_level > inst.capacity:
        report.append("initial level exceeds capacity")
    if inst.terminal_level is not None:
        if inst.terminal_level < 0:
            report.append("terminal level must be >= 0")
        if inst.terminal_level > inst.capacity:
            report.append("terminal level exceeds capacity")
    for name in ('efficiency_gen', 'efficiency_pump'):
        if any(v <= 0 for v in getattr(inst, name)):
            report.append(f"{name} must be > 0")
    if inst.min_up < 1:
        report.append("min-up must be >= 1")
    if inst.min_down < 1:
        report.append("min-down must be >= 1")
    if inst.j_max < 1:
        report.append("j_max must be >= 1")
    if inst.initial_counter < 0:
        report.append("initial counter must be >= 0")
    for name in ('gen_cost_pieces', 'pump_cost_pieces'):
        if any(len(pieces) < 1 for pieces in getattr(inst, name)):
            report.append(f"{name} needs at least one piece per stage")
    if inst.grid_reservoir is not None:
        if any(p < 0 or p > inst.capacity for p in inst.grid_reservoir):
            report.append("reservoir grid points must lie in [0, capacity]")
    if inst.grid_ramp is not None:
        if any(p < 0 or p > inst.gen_max for p in inst.grid_ramp):
            report.append("ramp grid points must lie in [0, max generation]")
    if report:
        logger.debug("instance %s: %d violations", inst.name, len(report))
    return report


def require_valid(inst):
    report = validate(inst)
    if report:
        raise ValidationFailed(report)
    return inst
