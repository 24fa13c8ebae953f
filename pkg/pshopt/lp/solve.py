import logging

from pshopt.lp.highs import solve_highs
from pshopt.lp.simplex import solve_simplex
from pshopt.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

BACKENDS = {
    'highs': solve_highs,
    'simplex': solve_simplex,
}

_default_backend = DEFAULT_SETTINGS.lp_backend


def set_default_backend(name):
    """ Process-wide LP backend (set once from the CLI settings). """
    global _default_backend
    if name not in BACKENDS:
        raise ValueError(f"unknown LP backend {name!r}")
    _default_backend = name


def solve_lp(model, backend=None, lower=None, upper=None):
    """
    Solve the continuous relaxation of `model` (binary marks ignored).
    `lower`/`upper` optionally replace the variable bounds.
    """
    solver = BACKENDS[backend or _default_backend]
    return solver(model, lower=lower, upper=upper)
