"""
The finite-grid event network: a time-expanded DAG whose nodes are
discretized event states (stage, mode, level, ramp, counter) and whose
arcs are admissible events between them.
"""

import collections
import logging

import attr

from pshopt.events.blocks import RampRule, ramp_end_rule
from pshopt.events.state import EventState, boundary_cost, enumerate_events, origin, transition
from pshopt.modes import Mode
from pshopt.settings import FEAS_TOL

logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class Arc():

    source = attr.ib(type=int)
    target = attr.ib(type=int)
    #: first stage of the block (0 for entry arcs)
    start = attr.ib(type=int)
    #: first stage of the successor event
    end = attr.ib(type=int)
    mode = attr.ib(type=Mode)
    successor = attr.ib(type=Mode)
    level_start = attr.ib(type=float)
    ramp_start = attr.ib(type=float)
    #: None: free terminal level
    level_end = attr.ib()
    ramp_end = attr.ib()
    rule = attr.ib(type=RampRule)
    #: start-up / shut-down cost of the event
    gamma = attr.ib(type=float)
    #: deterministic tie-break key
    order = attr.ib(type=tuple)

    @property
    def entry(self):
        """ Zero-length arc leaving the pre-horizon origin. """
        return self.start == 0

    @property
    def has_block(self):
        return not self.entry and self.mode.online

    def block_key(self):
        """ Everything the block optimum depends on (no counter, no successor). """
        ramp_start = self.ramp_start if self.mode.turbine else 0.0
        ramp_end = self.ramp_end if self.rule is RampRule.PIN else None
        return (self.start, self.end, int(self.mode), self.level_start, ramp_start,
                self.level_end, ramp_end, self.rule.value)


@attr.s
class EventNetwork():

    inst = attr.ib()
    grid = attr.ib()
    strict = attr.ib(type=bool)
    #: node keys (stage, mode, level idx, ramp idx, counter), origin first, sink last
    nodes = attr.ib(type=list)
    arcs = attr.ib(type=list)
    out_arcs = attr.ib(type=list)
    in_arcs = attr.ib(type=list)

    @property
    def origin(self):
        return 0

    @property
    def sink(self):
        return len(self.nodes) - 1

    def stage_of(self, node):
        return self.nodes[node][0]

    def __repr__(self):
        return f"<EventNetwork T={self.inst.horizon}: {len(self.nodes)} nodes, {len(self.arcs)} arcs>"


def _ramp_window(inst, start, end, ramp_start, ramp_end, rule):
    """ Per-stage necessary output bounds from capacity and ramping. """
    V = inst.ramp_limit
    n = end - start
    windows = []
    for k in range(n):
        lo, up = inst.gen_bounds[start + k - 1]
        lo = max(lo, ramp_start - V * (k + 1))
        up = min(up, ramp_start + V * (k + 1))
        back = n - 1 - k
        if rule is RampRule.PIN:
            lo = max(lo, ramp_end - V * back)
            up = min(up, ramp_end + V * back)
        elif rule is RampRule.CAP:
            up = min(up, V * (back + 1))
        windows.append((lo, up))
    return windows


def screen(inst, s, action, rule):
    """
    Cheap necessary condition for an online block from s to the
    action's boundary; the block LP decides the rest.
    """
    start, end = s.stage, action.end
    if end <= start:
        return True
    net_lo = net_hi = s.level + inst.drift(start, end)
    if s.mode.turbine:
        ramp_end = action.ramp if action.ramp is not None else 0.0
        windows = _ramp_window(inst, start, end, s.ramp, ramp_end, rule)
        for k, (lo, up) in enumerate(windows):
            if lo > up + FEAS_TOL:
                return False
            mu = inst.efficiency_gen[start + k - 1]
            net_lo -= mu * up
            net_hi -= mu * lo
    if s.mode.pump:
        for i in range(start, end):
            lo, up = inst.pump_bounds[i - 1]
            alpha = inst.efficiency_pump[i - 1]
            net_lo += alpha * lo
            net_hi += alpha * up
    if net_hi < -FEAS_TOL or net_lo > inst.capacity + FEAS_TOL:
        return False
    if action.level is not None:
        return net_lo - FEAS_TOL <= action.level <= net_hi + FEAS_TOL
    return True


def _key(s, level_index, ramp_index):
    return (s.stage, s.mode, level_index[s.level], ramp_index[s.ramp], s.counter)


def build_grid_network(inst, grid, strict=False):
    """
    Instantiate every state reachable from the origin on the grid,
    screen arcs, drop nodes that cannot reach the sink, and number the
    nodes by stage.
    """
    T = inst.horizon
    level_index = grid.level_index()
    ramp_index = grid.ramp_index()
    sink = (T + 1, Mode.END, -1, -1, 0)
    root = origin(inst)
    by_stage = collections.defaultdict(dict)
    by_stage[0][_key(root, level_index, ramp_index)] = root
    raw = []
    for stage in range(0, T + 1):
        for key in sorted(by_stage[stage]):
            s = by_stage[stage][key]
            for action in enumerate_events(s, inst, grid):
                rule = ramp_end_rule(s.mode, action.successor, inst, strict)
                if s.stage and s.mode.online and not screen(inst, s, action, rule):
                    continue
                nxt = transition(s, action, inst)
                if action.successor is Mode.END:
                    target = sink
                else:
                    target = _key(nxt, level_index, ramp_index)
                    by_stage[nxt.stage].setdefault(target, nxt)
                raw.append((key, target, s, action, rule))

    predecessors = collections.defaultdict(set)
    for key, target, *_ in raw:
        predecessors[target].add(key)
    alive = {sink}
    pending = [sink]
    while pending:
        for key in predecessors[pending.pop()]:
            if key not in alive:
                alive.add(key)
                pending.append(key)

    root_key = _key(root, level_index, ramp_index)
    keys = sorted(k for k in alive if k not in (root_key, sink))
    nodes = [root_key] + keys + [sink]
    ids = {k: n for n, k in enumerate(nodes)}
    arcs = []
    for key, target, s, action, rule in raw:
        if key not in alive or target not in alive:
            continue
        ramp_end = action.ramp
        if rule is RampRule.PIN and ramp_end is None:
            ramp_end = 0.0
        arcs.append(Arc(
            source=ids[key], target=ids[target], start=s.stage, end=action.end,
            mode=s.mode, successor=action.successor, level_start=s.level,
            ramp_start=s.ramp, level_end=action.level, ramp_end=ramp_end, rule=rule,
            gamma=boundary_cost(s.mode, action.successor, action.end, inst),
            order=action.order(grid)))
    arcs.sort(key=lambda a: (a.source, a.order))
    out_arcs = [[] for _ in nodes]
    in_arcs = [[] for _ in nodes]
    for k, arc in enumerate(arcs):
        out_arcs[arc.source].append(k)
        in_arcs[arc.target].append(k)
    net = EventNetwork(inst, grid, strict, nodes, arcs, out_arcs, in_arcs)
    logger.info("event network: %d nodes, %d arcs (%d screened candidates)",
                len(nodes), len(arcs), len(raw))
    return net


def node_state(net, node):
    """ EventState of a network node (the sink has none). """
    stage, mode, m, h, counter = net.nodes[node]
    if mode is Mode.END:
        return None
    return EventState(stage, mode, net.grid.reservoir_points[m], net.grid.ramp_points[h], counter)
