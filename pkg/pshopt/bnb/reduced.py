"""
Reduced-state networks: nodes (stage, mode, counter) with the
continuous boundary values left to the node relaxation.
"""

import collections
import logging

import attr

from pshopt.events.blocks import ramp_end_rule
from pshopt.events.state import EventState, boundary_cost, enumerate_events, transition
from pshopt.modes import Mode

logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class ReducedState():

    stage = attr.ib(type=int)
    mode = attr.ib(type=Mode)
    counter = attr.ib(type=int)

    @classmethod
    def of(cls, state):
        return cls(state.stage, state.mode, state.counter)

    def event_state(self):
        return EventState(self.stage, self.mode, None, None, self.counter)


@attr.s(frozen=True)
class ReducedArc():

    source = attr.ib(type=int)
    target = attr.ib(type=int)
    start = attr.ib(type=int)
    end = attr.ib(type=int)
    mode = attr.ib(type=Mode)
    successor = attr.ib(type=Mode)
    rule = attr.ib()
    gamma = attr.ib(type=float)

    @property
    def entry(self):
        return self.start == 0


@attr.s
class ReducedNetwork():

    #: ReducedState per node; the root first, the sink last
    nodes = attr.ib(type=list)
    arcs = attr.ib(type=list)
    out_arcs = attr.ib(type=list)
    in_arcs = attr.ib(type=list)

    @property
    def root(self):
        return 0

    @property
    def sink(self):
        return len(self.nodes) - 1


def build_reduced_network(inst, root, prefix=(), strict=False):
    """
    The chain of `prefix` events from `root` followed by every reduced
    state reachable from the chain's last state. Returns None when the
    sink cannot be reached.
    """
    T = inst.horizon
    sink = ReducedState(T + 1, Mode.END, 0)
    raw = []

    def arc(s, action, nxt):
        rule = ramp_end_rule(s.mode, action.successor, inst, strict)
        gamma = boundary_cost(s.mode, action.successor, action.end, inst)
        raw.append((ReducedState.of(s), ReducedState.of(nxt) if action.successor is not Mode.END else sink,
                    s.stage, action.end, s.mode, action.successor, rule, gamma))

    chain = [ReducedState.of(root)]
    state = root
    for action in prefix:
        nxt = transition(state, action, inst)
        arc(state, action, nxt)
        state = nxt
        chain.append(ReducedState.of(nxt) if nxt.mode is not Mode.END else sink)

    by_stage = collections.defaultdict(set)
    if state.mode is not Mode.END:
        by_stage[state.stage].add(ReducedState.of(state))
    for stage in range(state.stage, T + 1):
        for s in sorted(by_stage[stage], key=lambda r: (r.mode, r.counter)):
            full = s.event_state()
            for action in enumerate_events(full, inst):
                nxt = transition(full, action, inst)
                if action.successor is not Mode.END:
                    by_stage[nxt.stage].add(ReducedState.of(nxt))
                arc(full, action, nxt)

    predecessors = collections.defaultdict(set)
    for source, target, *_ in raw:
        predecessors[target].add(source)
    alive = {sink}
    pending = [sink]
    while pending:
        for s in predecessors[pending.pop()]:
            if s not in alive:
                alive.add(s)
                pending.append(s)
    if chain[0] not in alive:
        return None

    rest = sorted((s for s in alive if s != chain[0] and s != sink),
                  key=lambda r: (r.stage, r.mode, r.counter))
    nodes = [chain[0]] + rest + [sink]
    ids = {s: k for k, s in enumerate(nodes)}
    arcs = [ReducedArc(ids[source], ids[target], start, end, mode, successor, rule, gamma)
            for source, target, start, end, mode, successor, rule, gamma in raw
            if source in alive and target in alive]
    out_arcs = [[] for _ in nodes]
    in_arcs = [[] for _ in nodes]
    for k, a in enumerate(arcs):
        out_arcs[a.source].append(k)
        in_arcs[a.target].append(k)
    return ReducedNetwork(nodes, arcs, out_arcs, in_arcs)
