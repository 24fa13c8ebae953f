"""
The all-in-one network LP: a unit flow from the origin to the sink in
which every event arc carries its own block model scaled by the arc
flow. No arc costs are precomputed.
"""

import logging

import attr

from pshopt.events.blocks import Ref, add_block_lp
from pshopt.lp import LinearProgram, Sense

logger = logging.getLogger(__name__)


@attr.s
class NetworkLpIndex():

    #: flow variable per arc
    flow = attr.ib(type=list)
    #: BlockVars per arc (None for offline and entry arcs)
    blocks = attr.ib(type=list)
    #: conservation row per node (None for the sink)
    rows = attr.ib(type=list)


def build_network_lp(net, inst=None):
    inst = inst or net.inst
    lp = LinearProgram(f"network {inst.name}".strip())
    flow = []
    blocks = []
    for k, arc in enumerate(net.arcs):
        pi = lp.add_variable(f"pi_{k}", 0.0, 1.0, cost=arc.gamma)
        flow.append(pi)
        if not arc.has_block:
            blocks.append(None)
            continue
        level_end = None if arc.level_end is None else Ref.fixed(arc.level_end)
        ramp_end = None if arc.ramp_end is None else Ref.fixed(arc.ramp_end)
        blocks.append(add_block_lp(lp, inst, arc.mode, arc.start, arc.end, Ref.fixed(arc.level_start),
                                   Ref.fixed(arc.ramp_start), level_end, ramp_end, arc.rule,
                                   scale=pi, tag=f"a{k}"))
    rows = []
    for node in range(len(net.nodes)):
        if node == net.sink:
            rows.append(None)
        elif node == net.origin:
            rows.append(lp.add_constraint({flow[k]: 1.0 for k in net.out_arcs[node]},
                                          Sense.EQ, 1.0, "origin"))
        else:
            terms = {flow[k]: 1.0 for k in net.in_arcs[node]}
            for k in net.out_arcs[node]:
                terms[flow[k]] = -1.0
            rows.append(lp.add_constraint(terms, Sense.EQ, 0.0, f"node_{node}"))
    logger.info("network LP: %d variables, %d constraints", lp.num_variables, lp.num_constraints)
    return lp, NetworkLpIndex(flow, blocks, rows)
