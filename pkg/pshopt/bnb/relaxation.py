"""
Node relaxation of the event branch-and-bound: a unit flow over a
reduced network where the products of arc flow and node boundary values
are replaced by lifted variables under McCormick envelopes, and every
arc carries its perspective-scaled block.
"""

import logging
import math

import attr

from pshopt.errors import NumericalFailure
from pshopt.events.blocks import Ref, add_block_lp
from pshopt.lp import LinearProgram, Sense, Status, solve_lp
from pshopt.modes import Mode

logger = logging.getLogger(__name__)


@attr.s
class RelaxationIndex():

    flow = attr.ib(type=list)
    #: node level / ramp variables (None where fixed or absent)
    level = attr.ib(type=list)
    ramp = attr.ib(type=list)
    blocks = attr.ib(type=list)


def _mccormick(lp, w, pi, x, upper):
    """ w = pi * x for pi in [0, 1] and x in [0, upper]. """
    lp.add_constraint({w: 1.0, pi: -upper}, Sense.LE, 0.0)
    lp.add_constraint({w: 1.0, x: -1.0}, Sense.LE, 0.0)
    lp.add_constraint({w: 1.0, x: -1.0, pi: -upper}, Sense.GE, -upper)


def _lifted(lp, name, pi, node_var, node_value, upper):
    """ Lifted product of the arc flow and a node value, or None if identically 0. """
    if node_var is None and not node_value:
        return None
    w = lp.add_variable(name, 0.0, upper)
    if node_var is None:
        lp.add_constraint({w: 1.0, pi: -node_value}, Sense.EQ, 0.0)
    else:
        _mccormick(lp, w, pi, node_var, upper)
    return w


def build_relaxation(net, inst, root_level, root_ramp=0.0):
    """
    `root_level`/`root_ramp` pin the boundary values of the root node.
    Turbine-mode nodes carry a ramp variable; every other node has
    ramping boundary 0.
    """
    lp = LinearProgram("node relaxation")
    M, H = inst.capacity, inst.gen_max
    level = [None] * len(net.nodes)
    ramp = [None] * len(net.nodes)
    fixed_level = {net.root: root_level}
    fixed_ramp = {net.root: root_ramp if net.nodes[net.root].mode.turbine else 0.0}
    if inst.terminal_level is not None:
        fixed_level[net.sink] = inst.terminal_level
    for k, node in enumerate(net.nodes):
        if k not in fixed_level:
            level[k] = lp.add_variable(f"M_{k}", 0.0, M)
        if k not in fixed_ramp and node.mode.turbine:
            ramp[k] = lp.add_variable(f"H_{k}", 0.0, H)

    flow, blocks = [], []
    m_in, m_out, h_in, h_out = [], [], [], []
    for k, arc in enumerate(net.arcs):
        pi = lp.add_variable(f"pi_{k}", 0.0, 1.0, cost=arc.gamma)
        flow.append(pi)
        u, v = arc.source, arc.target
        m_in.append(_lifted(lp, f"min_{k}", pi, level[u], fixed_level.get(u, 0.0), M))
        m_out.append(_lifted(lp, f"mout_{k}", pi, level[v], fixed_level.get(v, 0.0), M))
        source_turbine = arc.mode.turbine and not arc.entry
        h_in.append(_lifted(lp, f"hin_{k}", pi, ramp[u], fixed_ramp.get(u, 0.0), H)
                    if source_turbine else None)
        target_turbine = source_turbine and arc.successor.turbine
        h_out.append(_lifted(lp, f"hout_{k}", pi, ramp[v], fixed_ramp.get(v, 0.0), H)
                     if target_turbine else None)
        level_start = Ref.var(m_in[k]) if m_in[k] is not None else Ref.fixed(0.0)
        level_end = Ref.var(m_out[k]) if m_out[k] is not None else Ref.fixed(0.0)
        if arc.entry:
            terms = {m_out[k]: 1.0}
            if m_in[k] is not None:
                terms[m_in[k]] = -1.0
            lp.add_constraint(terms, Sense.EQ, 0.0, f"entry_{k}")
            blocks.append(None)
            continue
        ramp_start = Ref.var(h_in[k]) if h_in[k] is not None else Ref.fixed(0.0)
        ramp_end = Ref.var(h_out[k]) if h_out[k] is not None else Ref.fixed(0.0)
        blocks.append(add_block_lp(lp, inst, arc.mode, arc.start, arc.end, level_start, ramp_start,
                                   level_end, ramp_end, arc.rule, scale=pi, tag=f"a{k}"))

    for node in range(len(net.nodes)):
        if node == net.sink:
            continue
        if node == net.root:
            lp.add_constraint({flow[k]: 1.0 for k in net.out_arcs[node]}, Sense.EQ, 1.0, "root")
            continue
        terms = {flow[k]: 1.0 for k in net.in_arcs[node]}
        for k in net.out_arcs[node]:
            terms[flow[k]] = -1.0
        lp.add_constraint(terms, Sense.EQ, 0.0, f"flow_{node}")
        for inward, outward, what in ((m_out, m_in, 'level'), (h_out, h_in, 'ramp')):
            terms = {}
            for k in net.in_arcs[node]:
                if inward[k] is not None:
                    terms[inward[k]] = terms.get(inward[k], 0.0) + 1.0
            for k in net.out_arcs[node]:
                if outward[k] is not None:
                    terms[outward[k]] = terms.get(outward[k], 0.0) - 1.0
            if terms:
                lp.add_constraint(terms, Sense.EQ, 0.0, f"{what}_{node}")
    return lp, RelaxationIndex(flow, level, ramp, blocks)


def solve_relaxation(net, inst, root_level, root_ramp=0.0, lp_backend=None):
    """ Relaxation optimum, inf when infeasible. """
    if net is None:
        return math.inf
    lp, _ = build_relaxation(net, inst, root_level, root_ramp)
    sol = solve_lp(lp, backend=lp_backend)
    if sol.status is Status.INFEASIBLE:
        return math.inf
    if not sol.optimal:
        raise NumericalFailure(f"node relaxation is {sol.status.value}")
    return sol.objective
