import logging
import os

import attr

logger = logging.getLogger(__name__)

LP_BACKENDS = ('highs', 'simplex')
MIP_BACKENDS = ('bnb', 'highs')

#: absolute primal feasibility tolerance on constraints and bounds
FEAS_TOL = 1e-7
#: relative objective tolerance
OPT_TOL = 1e-7
#: distance from {0, 1} below which a binary counts as integral
INTEGRALITY_TOL = 1e-6
#: offline drift is matched to grid points within this distance
SNAP_TOL = 1e-9
#: tolerance used when schedules are audited
AUDIT_TOL = 1e-6


def _backend(choices):
    def check(instance, attribute, value):
        if value not in choices:
            raise ValueError(f"{attribute.name} must be one of {choices}, got {value!r}")
    return check


@attr.s(frozen=True)
class Settings():

    #: LP backend used by solve_lp
    lp_backend = attr.ib(type=str, default='highs', validator=_backend(LP_BACKENDS))
    #: MIP backend used for the time-indexed benchmark
    mip_backend = attr.ib(type=str, default='bnb', validator=_backend(MIP_BACKENDS))
    #: worker processes for arc-cost precomputation (<= 1: in-process)
    threads = attr.ib(type=int, default=1)
    #: directory of the arc-cost cache sidecar files (None: no persistence)
    cache_dir = attr.ib(default=None)
    #: read and write the arc-cost cache
    use_cache = attr.ib(type=bool, default=True)
    #: pin the terminal ramping boundary for every successor mode
    strict_terminal_h = attr.ib(type=bool, default=False)
    #: seconds granted to the MIP and to the event branch-and-bound
    time_budget = attr.ib(type=float, default=600.0)
    #: optional LP-format dump of the model solved by `solve`
    dump_lp = attr.ib(default=None)
    #: optional node trace written by the event branch-and-bound
    bnb_log = attr.ib(default=None)

    @classmethod
    def from_env(cls, environ=None, **overrides):
        environ = os.environ if environ is None else environ
        values = {}
        if environ.get('PSHOPT_CACHE_DIR'):
            values['cache_dir'] = environ['PSHOPT_CACHE_DIR']
        if environ.get('PSHOPT_LP_BACKEND'):
            values['lp_backend'] = environ['PSHOPT_LP_BACKEND']
        if environ.get('PSHOPT_THREADS'):
            values['threads'] = int(environ['PSHOPT_THREADS'])
        values.update({k: v for k, v in overrides.items() if v is not None})
        logger.debug("settings from environment: %s", values)
        return cls(**values)


DEFAULT_SETTINGS = Settings()
