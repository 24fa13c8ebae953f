class PshoptError(Exception):
    """ Base class of all errors raised by pshopt. """
    pass


class MalformedDocument(PshoptError):
    def __init__(self, reason):
        self.reason = reason
    def __str__(self):
        return f"malformed instance document: {self.reason}"


class MissingField(PshoptError):
    def __init__(self, field):
        self.field = field
    def __str__(self):
        return f"required field missing: {self.field}"


class UnitRangeError(PshoptError):
    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
    def __str__(self):
        return "invalid instance: " + "; ".join(self.violations)


class ValidationFailed(UnitRangeError):
    pass


class GridExcludesBoundary(PshoptError):
    def __init__(self, what, value):
        self.what = what
        self.value = value
    def __str__(self):
        return f"grid {self.what} does not contain required point {self.value:g}"


class NumericalFailure(PshoptError):
    def __init__(self, reason):
        self.reason = reason
    def __str__(self):
        return f"LP solver could not certify a status: {self.reason}"


class TimeBudgetExceeded(PshoptError):
    def __init__(self, budget, incumbent=None, gap=float('inf')):
        #: seconds granted
        self.budget = budget
        #: best feasible solution found so far (solver specific) or None
        self.incumbent = incumbent
        #: relative optimality gap at the time of abort
        self.gap = gap
    def __str__(self):
        found = 'with' if self.incumbent is not None else 'without'
        return f"time budget of {self.budget:.1f} s exceeded ({found} incumbent, gap {self.gap:.3%})"


class Infeasible(PshoptError):
    def __init__(self, what='problem'):
        self.what = what
    def __str__(self):
        return f"{self.what} is infeasible"


class FractionalBinaries(PshoptError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
    def __str__(self):
        return f"binary {self.name} is fractional ({self.value:.6g})"


class InfeasibleSchedule(PshoptError):
    def __init__(self, constraint, stage=None, excess=None):
        self.constraint = constraint
        self.stage = stage
        self.excess = excess
    def __str__(self):
        where = f" at {self.stage}" if self.stage is not None else ""
        by = f" (by {self.excess:.3g})" if self.excess is not None else ""
        return f"{self.constraint}{where}{by}"


class BoundaryContract(PshoptError):
    def __init__(self, mode, ramp_end):
        self.mode = mode
        self.ramp_end = ramp_end
    def __str__(self):
        return f"{self.mode} block must end with ramping boundary 0, got {self.ramp_end:g}"


class ModeDisabled(PshoptError):
    def __init__(self, mode):
        self.mode = mode
    def __str__(self):
        return f"mode {self.mode} is not enabled for this instance"


class NoFeasiblePath(PshoptError):
    def __str__(self):
        return "no feasible path from the initial state to the terminal stage"


class DecompositionFailure(PshoptError):
    def __init__(self, reason):
        self.reason = reason
    def __str__(self):
        return f"flow decomposition failed: {self.reason}"


class LimitsExceeded(PshoptError):
    def __init__(self, what, value, limit):
        self.what = what
        self.value = value
        self.limit = limit
    def __str__(self):
        return f"{self.what} = {self.value} exceeds the limit {self.limit}"
