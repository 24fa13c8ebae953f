import logging

from pshopt.errors import NoFeasiblePath, NumericalFailure
from pshopt.lp import Status, solve_lp, write_lp_format
from pshopt.netflow.builder import build_network_lp
from pshopt.netflow.extract import extract_path
from pshopt.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


def solve_network_lp(net, inst=None, settings=DEFAULT_SETTINGS):
    """ Build, solve and extract; returns (objective, Schedule). """
    inst = inst or net.inst
    lp, index = build_network_lp(net, inst)
    if settings.dump_lp:
        write_lp_format(lp, settings.dump_lp)
    sol = solve_lp(lp, backend=settings.lp_backend)
    if sol.status is Status.INFEASIBLE:
        raise NoFeasiblePath()
    if not sol.optimal:
        raise NumericalFailure(f"network LP is {sol.status.value}")
    logger.info("network LP: objective %.6f", sol.objective)
    return sol.objective, extract_path(sol, index, net, inst, settings.lp_backend)
