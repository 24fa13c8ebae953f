"""
Best-first branch-and-bound over event skeletons.

Nodes branch on the next event (j, x) of their skeleton. In continuous
mode the boundary values are never committed. A child is first bounded
by the commitment bound of its mode prefix; the relaxation over its
whole skeleton and every completion is added when the node is selected.
A leaf is priced by one LP over its skeleton, and skeletons that fix the
same modes as an earlier one are dropped. With a grid the search
branches on grid events, accumulates exact arc costs, starts from the
grid DP path and bounds the remainder by the exact cost-to-go and the
relaxation pinned at the committed boundary.

Dives (depth-first plunges along the smallest bound) run at the root
and after every `greedy_interval` expansions.
"""

import heapq
import itertools
import logging
import math
import time

import attr
import numpy as np
import pandas as pd

from pshopt.bnb.commitment import CommitmentBound, skeleton_modes
from pshopt.bnb.greedy import upper_bound_completion
from pshopt.bnb.reduced import ReducedState, build_reduced_network
from pshopt.bnb.relaxation import solve_relaxation
from pshopt.bnb.skeleton import evaluate_skeleton
from pshopt.errors import Infeasible, TimeBudgetExceeded
from pshopt.events.arc_costs import precompute_arc_costs
from pshopt.events.dp import backward_values, optimal_path, path_schedule
from pshopt.events.network import build_grid_network, node_state
from pshopt.events.state import EventAction, EventState, enumerate_events, origin, transition
from pshopt.modes import Mode
from pshopt.settings import DEFAULT_SETTINGS, OPT_TOL

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ['node', 'parent', 'skeleton', 'lb', 'ub', 'action', 'status']


@attr.s(frozen=True)
class BnbConfig():

    #: seconds before TimeBudgetExceeded
    time_budget = attr.ib(type=float, default=600.0)
    #: dive from the selected node after every n-th expansion (0: root only)
    greedy_interval = attr.ib(type=int, default=50)
    #: GridSpec restricting boundary values (None: continuous search)
    grid = attr.ib(default=None)
    #: pin the ramping boundary for every successor mode
    strict = attr.ib(type=bool, default=False)
    #: callable receiving one dict per node event
    trace = attr.ib(default=None)
    settings = attr.ib(default=DEFAULT_SETTINGS)

    @classmethod
    def from_settings(cls, settings, **kw):
        kw.setdefault('time_budget', settings.time_budget)
        kw.setdefault('strict', settings.strict_terminal_h)
        return cls(settings=settings, **kw)


@attr.s
class BnbNode():

    id = attr.ib(type=int)
    parent = attr.ib()
    #: events taken from the origin
    skeleton = attr.ib(type=tuple)
    #: frontier event state (boundary values None in continuous mode)
    state = attr.ib(type=EventState)
    lower_bound = attr.ib(type=float, default=-math.inf)
    #: exact cost of the committed events (grid mode; 0 in continuous mode)
    cost_so_far = attr.ib(type=float, default=0.0)
    status = attr.ib(type=str, default='open')
    #: grid network node and arc ids (grid mode)
    grid_node = attr.ib(default=None)
    path = attr.ib(type=tuple, default=())
    #: lower bound includes the node relaxation
    refined = attr.ib(type=bool, default=False)

    @property
    def depth(self):
        return len(self.skeleton)

    @property
    def reduced(self):
        return ReducedState.of(self.state)

    @property
    def leaf(self):
        return self.state.mode is Mode.END

    def describe(self):
        return '|'.join(f"{a.end}:{a.successor.name}" for a in self.skeleton)


@attr.s
class BnbStats():

    nodes = attr.ib(type=int, default=0)
    expanded = attr.ib(type=int, default=0)
    pruned = attr.ib(type=int, default=0)
    duplicates = attr.ib(type=int, default=0)
    leaves = attr.ib(type=int, default=0)
    relaxations = attr.ib(type=int, default=0)
    commitment_lps = attr.ib(type=int, default=0)
    dives = attr.ib(type=int, default=0)
    greedy_runs = attr.ib(type=int, default=0)
    seconds = attr.ib(type=float, default=0.0)


@attr.s(frozen=True)
class BnbResult():

    value = attr.ib(type=float)
    schedule = attr.ib()
    stats = attr.ib(type=BnbStats)


class TraceLog():
    """ Node-trace collector usable as BnbConfig.trace. """

    def __init__(self):
        self.rows = []

    def __call__(self, record):
        self.rows.append(record)

    def frame(self):
        return pd.DataFrame(self.rows, columns=TRACE_COLUMNS)

    def to_csv(self, path):
        self.frame().to_csv(path, index=False)


def make_root(inst):
    return BnbNode(0, None, (), origin(inst))


def branch(node, inst, net=None, costs=None):
    """ Children in tie-break order; grid mode follows the network's arcs. """
    children = []
    if net is None:
        for action in enumerate_events(node.state, inst):
            child = transition(node.state, action, inst)
            children.append(BnbNode(None, node.id, node.skeleton + (action,), child))
        return children
    for k in net.out_arcs[node.grid_node]:
        if not np.isfinite(costs[k]):
            continue
        arc = net.arcs[k]
        state = node_state(net, arc.target) or EventState(arc.end, Mode.END, arc.level_end, 0.0, 0)
        action = EventAction(arc.end, arc.successor, arc.level_end, arc.ramp_end)
        children.append(BnbNode(None, node.id, node.skeleton + (action,), state,
                                cost_so_far=node.cost_so_far + costs[k],
                                grid_node=arc.target, path=node.path + (k,)))
    return children


def relax_lower_bound(node, inst, strict=False, lp_backend=None):
    """
    Continuous mode: relaxation over the node's skeleton from the
    origin. Grid mode: committed cost plus the relaxation from the
    frontier pinned at its boundary values.
    """
    if node.grid_node is None:
        net = build_reduced_network(inst, origin(inst), node.skeleton, strict)
        return solve_relaxation(net, inst, inst.initial_level, 0.0, lp_backend)
    if node.leaf:
        return node.cost_so_far
    net = build_reduced_network(inst, node.state, (), strict)
    return node.cost_so_far + solve_relaxation(net, inst, node.state.level, node.state.ramp, lp_backend)


def solve_bnb(inst, config=None):
    config = config or BnbConfig()
    lp_backend = config.settings.lp_backend
    strict = config.strict
    started = time.perf_counter()
    stats = BnbStats()
    counter = itertools.count()
    ids = itertools.count()
    heap = []

    net = costs = to_go = commitment = None
    if config.grid is not None:
        net = build_grid_network(inst, config.grid, strict)
        costs = precompute_arc_costs(net, inst, config.settings)
        to_go, choice = backward_values(net, costs)
    else:
        commitment = CommitmentBound(inst, lp_backend)

    incumbent = None
    best = math.inf
    bound_cache = {}
    seen = set()

    def cutoff():
        return best - OPT_TOL * max(1.0, abs(best)) if incumbent is not None else math.inf

    def check_budget():
        if time.perf_counter() - started > config.time_budget:
            floor = heap[0][0] if heap else best
            gap = (best - floor) / max(1.0, abs(best)) if incumbent is not None else math.inf
            raise TimeBudgetExceeded(config.time_budget, (best, incumbent) if incumbent is not None else None, gap)

    def trace(node, status, action=''):
        if config.trace is not None:
            config.trace({'node': node.id, 'parent': node.parent, 'skeleton': node.describe(),
                          'lb': node.lower_bound, 'ub': best, 'action': action, 'status': status})

    def offer(value, schedule_fn, node):
        nonlocal incumbent, best
        if incumbent is None or value < cutoff():
            best = value
            incumbent = schedule_fn()
            logger.debug("bnb: incumbent %.6f from node %d", best, node.id)
            trace(node, 'incumbent')

    def greedy(node):
        stats.greedy_runs += 1
        found = upper_bound_completion(node, inst, strict, lp_backend)
        if found is not None:
            offer(found[0], lambda: found[1], node)

    def quick_bound(node):
        if net is not None:
            return node.cost_so_far + float(to_go[node.grid_node])
        stats.commitment_lps += 1
        return commitment(skeleton_modes(inst, node.skeleton))

    def refine(node):
        node.refined = True
        key = node.grid_node
        if key is not None and key in bound_cache:
            lb = node.cost_so_far + bound_cache[key]
        else:
            stats.relaxations += 1
            lb = relax_lower_bound(node, inst, strict, lp_backend)
            if key is not None:
                bound_cache[key] = lb - node.cost_so_far
        node.lower_bound = max(node.lower_bound, lb)

    def evaluate_leaf(node):
        stats.leaves += 1
        node.status = 'leaf'
        if net is None:
            found = evaluate_skeleton(inst, node.skeleton, strict, lp_backend)
            if found is None:
                node.lower_bound = math.inf
                trace(node, 'infeasible')
                return
            node.lower_bound = found[0]
            offer(found[0], lambda: found[1], node)
        else:
            node.lower_bound = node.cost_so_far
            offer(node.cost_so_far, lambda: path_schedule(net, node.path, inst, lp_backend), node)
        trace(node, 'leaf')

    def prune(node, action=''):
        node.status = 'pruned'
        stats.pruned += 1
        trace(node, 'pruned', action)

    def open_child(child):
        """ Bound a fresh child; True if it stays open. """
        child.id = next(ids)
        stats.nodes += 1
        action = f"{child.skeleton[-1].end}:{child.skeleton[-1].successor.name}"
        if net is None:
            key = skeleton_modes(inst, child.skeleton) + (child.state.mode, child.state.stage)
            if key in seen:
                child.status = 'duplicate'
                stats.duplicates += 1
                trace(child, 'duplicate', action)
                return False
            seen.add(key)
        if child.leaf:
            evaluate_leaf(child)
            return False
        child.lower_bound = quick_bound(child)
        if child.lower_bound >= cutoff():
            prune(child, action)
            return False
        trace(child, 'open', action)
        return True

    def expand(node):
        node.status = 'expanded'
        stats.expanded += 1
        trace(node, 'expanded')
        return [child for child in branch(node, inst, net, costs) if open_child(child)]

    def push(node):
        heapq.heappush(heap, (node.lower_bound, -node.depth, next(counter), node))

    def dive(node):
        """ Follow the child with the smallest bound to a leaf; queue its siblings. """
        stats.dives += 1
        while node is not None:
            check_budget()
            children = sorted(expand(node), key=lambda c: c.lower_bound)
            node = None
            for child in children:
                if child.lower_bound >= cutoff():
                    prune(child)
                elif node is None:
                    node = child
                else:
                    push(child)

    root = make_root(inst)
    root.id = next(ids)
    stats.nodes = 1
    if net is not None:
        root.grid_node = net.origin
        if not np.isfinite(to_go[net.origin]):
            raise Infeasible('schedule')
        seed = optimal_path(net, choice)
        offer(float(to_go[net.origin]), lambda: path_schedule(net, seed, inst, lp_backend), root)
    root.lower_bound = quick_bound(root)
    trace(root, 'root')
    if math.isinf(root.lower_bound):
        raise Infeasible('schedule')
    if incumbent is None:
        dive(root)
        if incumbent is None:
            greedy(root)
    else:
        push(root)

    while heap:
        check_budget()
        lb, _, _, node = heapq.heappop(heap)
        if lb >= cutoff():
            prune(node)
            continue
        if not node.refined:
            refine(node)
            if node.lower_bound >= cutoff():
                prune(node)
                continue
            if heap and node.lower_bound > heap[0][0]:
                push(node)
                continue
        if config.greedy_interval and (stats.expanded + 1) % config.greedy_interval == 0:
            dive(node)
        else:
            for child in expand(node):
                push(child)

    stats.seconds = time.perf_counter() - started
    if incumbent is None:
        raise Infeasible('schedule')
    logger.info("bnb%s: value %.6f, %d nodes, %d expanded, %d pruned, %d duplicates, %d leaves, %d dives, %.2f s",
                ' (grid)' if net is not None else '', best, stats.nodes, stats.expanded, stats.pruned,
                stats.duplicates, stats.leaves, stats.dives, stats.seconds)
    return BnbResult(best, incumbent, stats)
