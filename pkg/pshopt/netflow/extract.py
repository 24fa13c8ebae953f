"""
Path recovery from a network LP solution. Integral flows are read
directly; fractional flows are decomposed into origin-sink paths and
the cheapest path, re-solved block by block, is returned.
"""

import logging

import networkx as nx
import numpy as np

from pshopt.errors import DecompositionFailure
from pshopt.events.blocks import BlockResult, levels_from_flows, read_block
from pshopt.events.dp import arc_trajectory, path_schedule
from pshopt.settings import FEAS_TOL, INTEGRALITY_TOL

logger = logging.getLogger(__name__)

#: flows below this are treated as zero during decomposition
FLOW_TOL = 1e-9
#: extracted path may exceed the LP objective by this much (relative)
OBJECTIVE_TOL = 1e-6


def flow_graph(net, values):
    """ Support graph of the flow: one edge per arc with positive flow. """
    g = nx.DiGraph()
    g.add_nodes_from(range(len(net.nodes)))
    for k, arc in enumerate(net.arcs):
        if values[k] > FLOW_TOL:
            g.add_edge(arc.source, arc.target, flow=float(values[k]), arc=k)
    return g


def decompose(net, values):
    """ (flow, arc ids) per path; the largest-flow arc is followed first. """
    g = flow_graph(net, values)
    paths = []
    while True:
        remaining = sum(d['flow'] for _, _, d in g.out_edges(net.origin, data=True))
        if remaining <= FLOW_TOL:
            break
        node, path = net.origin, []
        while node != net.sink:
            edges = list(g.out_edges(node, data=True))
            if not edges:
                raise DecompositionFailure(f"flow stops at node {node}")
            _, nxt, data = min(edges, key=lambda e: (-e[2]['flow'], e[2]['arc']))
            path.append((node, nxt, data['arc']))
            node = nxt
        amount = min(g.edges[u, v]['flow'] for u, v, _ in path)
        for u, v, _ in path:
            g.edges[u, v]['flow'] -= amount
            if g.edges[u, v]['flow'] <= FLOW_TOL:
                g.remove_edge(u, v)
        paths.append((amount, [k for _, _, k in path]))
    return paths


def _check_conservation(net, values):
    worst = abs(sum(values[k] for k in net.out_arcs[net.origin]) - 1.0)
    for node in range(1, net.sink):
        inflow = sum(values[k] for k in net.in_arcs[node])
        outflow = sum(values[k] for k in net.out_arcs[node])
        worst = max(worst, abs(inflow - outflow))
    if worst > FEAS_TOL:
        raise DecompositionFailure(f"flow conservation violated by {worst:.3g}")


def _unscaled(net, index, x, k, inst):
    blk = index.blocks[k]
    h_out, h_in, phi = read_block(blk, x, flow=x[index.flow[k]])
    levels = levels_from_flows(inst, net.arcs[k].start, net.arcs[k].level_start, h_out, h_in)
    return BlockResult(True, float(np.sum(phi)), h_out, h_in, levels, phi)


def path_cost(net, path, inst, lp_backend=None):
    """ Exact cost of a path with every block re-solved; inf if infeasible. """
    total = 0.0
    for k in path:
        arc = net.arcs[k]
        if arc.has_block:
            result = arc_trajectory(arc, inst, lp_backend)
            if not result.feasible:
                return np.inf
            total += result.cost
        total += arc.gamma
    return total


def extract_path(sol, index, net, inst=None, lp_backend=None):
    """ Schedule of an integral path whose cost matches the LP optimum. """
    if not sol.optimal:
        raise ValueError(f"network LP solution is {sol.status.value}")
    inst = inst or net.inst
    x = sol.x
    values = np.array([x[i] for i in index.flow])
    _check_conservation(net, values)
    if np.all(np.minimum(np.abs(values), np.abs(values - 1.0)) <= INTEGRALITY_TOL):
        path = []
        node = net.origin
        while node != net.sink:
            k = next(k for k in net.out_arcs[node] if values[k] > 0.5)
            path.append(k)
            node = net.arcs[k].target
        trajectories = {k: _unscaled(net, index, x, k, inst) for k in path if net.arcs[k].has_block}
        return path_schedule(net, path, inst, lp_backend, trajectories)

    candidates = decompose(net, values)
    logger.info("fractional network flow: %d paths in the decomposition", len(candidates))
    best_path, best_cost = None, np.inf
    for _, path in candidates:
        cost = path_cost(net, path, inst, lp_backend)
        if cost < best_cost - 1e-9:
            best_path, best_cost = path, cost
    limit = sol.objective + OBJECTIVE_TOL * max(1.0, abs(sol.objective))
    if best_path is None or best_cost > limit:
        raise DecompositionFailure(f"best decomposed path costs {best_cost:.6f}, LP optimum {sol.objective:.6f}")
    return path_schedule(net, best_path, inst, lp_backend)
