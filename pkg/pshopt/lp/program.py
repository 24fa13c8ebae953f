import enum
import logging
import math

import attr
import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

INF = math.inf


class Sense(enum.Enum):
    LE = '<='
    EQ = '='
    GE = '>='

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        for sense in cls:
            if sense.value == text:
                return sense
        raise ValueError(f"unknown constraint relation {text!r}")


class Status(enum.Enum):
    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'


@attr.s
class LpSolution():

    status = attr.ib(type=Status)
    #: objective value (None unless optimal)
    objective = attr.ib(default=None)
    #: primal values, one per variable (None unless optimal)
    x = attr.ib(default=None)
    #: dual values, one per constraint (optional diagnostics)
    duals = attr.ib(default=None)
    #: best proven lower bound (MIP only)
    bound = attr.ib(default=None)
    #: relative optimality gap (MIP only)
    gap = attr.ib(default=None)
    #: branch-and-bound nodes explored (MIP only)
    nodes = attr.ib(default=0)

    @property
    def optimal(self):
        return self.status is Status.OPTIMAL

    def value(self, index):
        return float(self.x[index])


class LinearProgram():
    """
    Minimization model: bounded variables (optionally marked binary) and
    sparse linear constraints with relations <=, =, >=.

    Rows are stored as coordinate triplets and assembled to a CSR matrix
    on demand; the model is never mutated by a solve.
    """
    def __init__(self, name='pshopt'):
        self.name = name
        self.names = []
        self.lower = []
        self.upper = []
        self.cost = []
        self.binary = []
        self.row_names = []
        self.senses = []
        self.rhs = []
        self._rows = []
        self._cols = []
        self._vals = []
        self._matrices = None

    @property
    def num_variables(self):
        return len(self.names)

    @property
    def num_constraints(self):
        return len(self.senses)

    def add_variable(self, name, lower=0.0, upper=INF, cost=0.0, binary=False):
        if lower > upper:
            raise ValueError(f"variable {name}: lower bound {lower} exceeds upper bound {upper}")
        if binary and (lower < 0 or upper > 1):
            raise ValueError(f"binary variable {name} must have bounds within [0, 1]")
        index = len(self.names)
        self.names.append(name)
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.cost.append(float(cost))
        self.binary.append(bool(binary))
        self._matrices = None
        return index

    def set_cost(self, index, cost):
        self.cost[index] = float(cost)
        self._matrices = None

    def set_bounds(self, index, lower=None, upper=None):
        if lower is not None:
            self.lower[index] = float(lower)
        if upper is not None:
            self.upper[index] = float(upper)
        if self.lower[index] > self.upper[index]:
            raise ValueError(f"variable {self.names[index]}: empty bounds")
        self._matrices = None

    def add_constraint(self, terms, sense, rhs, name=None):
        """ terms: mapping or iterable of (variable index, coefficient). """
        sense = Sense.parse(sense)
        row = len(self.senses)
        items = terms.items() if hasattr(terms, 'items') else terms
        n = len(self.names)
        for col, val in items:
            if not 0 <= col < n:
                raise IndexError(f"constraint {name or row} references undeclared variable {col}")
            if val != 0.0:
                self._rows.append(row)
                self._cols.append(col)
                self._vals.append(float(val))
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        self.row_names.append(name or f"c{row}")
        self._matrices = None
        return row

    def binary_indices(self):
        return [k for k, b in enumerate(self.binary) if b]

    def matrices(self):
        """ (c, A as CSR, senses array, rhs, lower, upper) """
        if self._matrices is None:
            m, n = len(self.senses), len(self.names)
            A = sp.coo_matrix((np.asarray(self._vals, dtype=float),
                               (np.asarray(self._rows, dtype=np.int64),
                                np.asarray(self._cols, dtype=np.int64))),
                              shape=(m, n)).tocsr()
            A.sum_duplicates()
            senses = np.array([s.value for s in self.senses], dtype=object)
            self._matrices = (np.asarray(self.cost, dtype=float), A, senses,
                              np.asarray(self.rhs, dtype=float),
                              np.asarray(self.lower, dtype=float),
                              np.asarray(self.upper, dtype=float))
        return self._matrices

    def residual(self, x, lower=None, upper=None):
        """ Largest violation of any constraint or bound by x. """
        c, A, senses, rhs, lb, ub = self.matrices()
        lb = lb if lower is None else lower
        ub = ub if upper is None else upper
        worst = 0.0
        if len(x):
            worst = max(worst, float(np.max(np.maximum(lb - x, 0.0))),
                        float(np.max(np.maximum(x - ub, 0.0))))
        if A.shape[0]:
            ax = A @ x
            le, ge, eq = senses == '<=', senses == '>=', senses == '='
            if le.any():
                worst = max(worst, float(np.max(np.maximum(ax[le] - rhs[le], 0.0))))
            if ge.any():
                worst = max(worst, float(np.max(np.maximum(rhs[ge] - ax[ge], 0.0))))
            if eq.any():
                worst = max(worst, float(np.max(np.abs(ax[eq] - rhs[eq]))))
        return worst

    def __repr__(self):
        return f"<LinearProgram {self.name}: {self.num_variables} variables, {self.num_constraints} constraints>"
