"""Core automata model for partially observed discrete-event systems.

A DES is a nondeterministic finite automaton whose alphabet is split into
observable and unobservable events, together with disjoint sets of secret
and nonsecret states.  This module provides the constructions that the
opacity verifiers are built from: unobservable reach, projection onto the
observable alphabet, the subset-construction observer, lazy full-observer
steps, and product-automaton steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union


class _Sink:
    """The empty estimate of the full observer, kept implicit.

    The empty set is never stored as an observer state; it absorbs every
    event. A single shared sentinel stands in for it.
    """

    def __repr__(self) -> str:
        return "SINK"


SINK = _Sink()

Estimate = Union[frozenset, _Sink]


@dataclass(frozen=True)
class Event:
    name: str
    observable: bool


@dataclass(frozen=True)
class EventTable:
    """Ordered alphabet with an observability flag per event."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ValueError("event table must contain at least one event")
        names = [e.name for e in self.entries]
        if any(not n for n in names):
            raise ValueError("event names must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("event names must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Event:
        return self.entries[i]

    def index(self, name: str) -> int:
        for i, e in enumerate(self.entries):
            if e.name == name:
                return i
        raise KeyError(name)

    @property
    def names(self) -> tuple:
        return tuple(e.name for e in self.entries)

    def observable_indices(self) -> tuple:
        return tuple(i for i, e in enumerate(self.entries) if e.observable)

    def unobservable_indices(self) -> tuple:
        return tuple(i for i, e in enumerate(self.entries) if not e.observable)


def make_events(observable: Iterable[str] = (), unobservable: Iterable[str] = ()) -> EventTable:
    entries = [Event(n, True) for n in observable]
    entries += [Event(n, False) for n in unobservable]
    return EventTable(tuple(entries))


@dataclass(frozen=True)
class Des:
    """A finite automaton with event observability and a secret partition.

    States are indices 0..state_count-1.  ``secret`` and ``nonsecret`` must
    be disjoint; states in neither set are neutral.  Immutable after
    construction.
    """

    state_count: int
    events: EventTable
    transitions: frozenset  # of (source, event, target) index triples
    initial: frozenset
    secret: frozenset = frozenset()
    nonsecret: frozenset = frozenset()
    state_names: Optional[tuple] = None

    def __post_init__(self):
        n = self.state_count
        if n <= 0:
            raise ValueError("state_count must be positive")
        if not self.initial:
            raise ValueError("initial state set must be nonempty")
        for group in (self.initial, self.secret, self.nonsecret):
            if any(not (0 <= q < n) for q in group):
                raise ValueError("state index out of range")
        if self.secret & self.nonsecret:
            raise ValueError("secret and nonsecret state sets must be disjoint")
        m = len(self.events)
        for (p, e, q) in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise ValueError("transition state index out of range")
            if not (0 <= e < m):
                raise ValueError("transition event index out of range")
        if self.state_names is not None and len(self.state_names) != n:
            raise ValueError("state_names length must match state_count")

    def state_name(self, q: int) -> str:
        if self.state_names is not None:
            return self.state_names[q]
        return str(q)


def _adjacency(des: Des) -> dict:
    """Map (source, event) -> sorted tuple of targets."""
    adj = {}
    for (p, e, q) in des.transitions:
        adj.setdefault((p, e), set()).add(q)
    return {k: tuple(sorted(v)) for k, v in adj.items()}


def _unobservable_adjacency(des: Des) -> dict:
    unobs = set(des.events.unobservable_indices())
    adj = {}
    for (p, e, q) in des.transitions:
        if e in unobs:
            adj.setdefault(p, set()).add(q)
    return adj


def unobservable_reach(des: Des, states: Iterable[int]) -> frozenset:
    """States reachable from ``states`` by unobservable strings (incl. epsilon)."""
    adj = _unobservable_adjacency(des)
    return _reach(adj, states)


def _reach(unobs_adj: dict, states: Iterable[int]) -> frozenset:
    seen = set(states)
    work = list(seen)
    while work:
        p = work.pop()
        for q in unobs_adj.get(p, ()):
            if q not in seen:
                seen.add(q)
                work.append(q)
    return frozenset(seen)


def _step_set(adj: dict, states: Iterable[int], event: int) -> set:
    out = set()
    for p in states:
        out.update(adj.get((p, event), ()))
    return out


def project(des: Des) -> Des:
    """Projected automaton over the observable alphabet.

    Same state set; the transition on observable ``a`` from ``q`` is the
    set of states reachable by unobservable strings around a single ``a``.
    The initial set becomes its unobservable reach.
    """
    adj = _adjacency(des)
    uadj = _unobservable_adjacency(des)
    obs = des.events.observable_indices()
    new_events = EventTable(tuple(Event(des.events[i].name, True) for i in obs))
    ur_cache = {q: _reach(uadj, (q,)) for q in range(des.state_count)}
    transitions = set()
    for q in range(des.state_count):
        for new_e, e in enumerate(obs):
            targets = _reach(uadj, _step_set(adj, ur_cache[q], e))
            for r in targets:
                transitions.add((q, new_e, r))
    return Des(
        state_count=des.state_count,
        events=new_events,
        transitions=frozenset(transitions),
        initial=_reach(uadj, des.initial),
        secret=des.secret,
        nonsecret=des.nonsecret,
        state_names=des.state_names,
    )


@dataclass(frozen=True)
class ObserverAutomaton:
    """Accessible part of the determinized projected automaton.

    ``states[i]`` is the current-state estimate after some observation;
    ``delta[i][j]`` is the successor state index on the j-th observable
    event, or None for the implicit empty-estimate sink.  States are listed
    in breadth-first discovery order, so ``states[0]`` is the initial
    estimate.
    """

    event_names: tuple
    states: tuple
    delta: tuple

    @property
    def initial(self) -> frozenset:
        return self.states[0]

    def step(self, state_index: int, event_index: int):
        return self.delta[state_index][event_index]

    def state_index(self, estimate: frozenset) -> int:
        return self.states.index(estimate)


def observer(des: Des) -> ObserverAutomaton:
    """Subset construction over observable events, reachable part only."""
    adj = _adjacency(des)
    uadj = _unobservable_adjacency(des)
    obs = des.events.observable_indices()
    init = _reach(uadj, des.initial)
    states = [init]
    index = {init: 0}
    delta = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = states[i]
        while len(delta) <= i:
            delta.append(None)
        row = []
        for e in obs:
            target = _reach(uadj, _step_set(adj, x, e))
            if not target:
                row.append(None)
                continue
            j = index.get(target)
            if j is None:
                j = len(states)
                index[target] = j
                states.append(target)
                queue.append(j)
            row.append(j)
        delta[i] = tuple(row)
    return ObserverAutomaton(
        event_names=tuple(des.events[i].name for i in obs),
        states=tuple(states),
        delta=tuple(delta),
    )


def full_observer_step(des: Des, estimate: Estimate, event: int) -> Estimate:
    """One step of the full observer; the empty estimate is the sink."""
    if not des.events[event].observable:
        raise ValueError("full observer steps only on observable events")
    if estimate is SINK:
        return SINK
    adj = _adjacency(des)
    uadj = _unobservable_adjacency(des)
    target = _reach(uadj, _step_set(adj, _reach(uadj, estimate), event))
    return target if target else SINK


class ProductState(NamedTuple):
    """A state of the product of the projected automaton with the full observer."""

    nfa_state: int
    set_state: Estimate


def product_step(pg: Des, state: ProductState, event: int) -> list:
    """Successors of a product state; materialized lazily per step.

    ``pg`` must be a projected (fully observable) automaton.  The estimate
    component steps through the full observer of ``pg``; the sink absorbs.
    """
    if des_has_unobservable(pg):
        raise ValueError("product_step expects a fully observable left operand")
    adj = _adjacency(pg)
    q_targets = adj.get((state.nfa_state, event), ())
    if not q_targets:
        return []
    if state.set_state is SINK:
        z = SINK
    else:
        zset = _step_set(adj, state.set_state, event)
        z = frozenset(zset) if zset else SINK
    return [ProductState(q, z) for q in q_targets]


def des_has_unobservable(des: Des) -> bool:
    return any(not e.observable for e in des.events.entries)


def accessible(des: Des) -> Des:
    """Restriction to states reachable from the initial set, densely reindexed."""
    adj = _adjacency(des)
    seen = set(des.initial)
    work = list(seen)
    while work:
        p = work.pop()
        for e in range(len(des.events)):
            for q in adj.get((p, e), ()):
                if q not in seen:
                    seen.add(q)
                    work.append(q)
    kept = sorted(seen)  # preserve relative state order
    remap = {old: new for new, old in enumerate(kept)}
    names = None
    if des.state_names is not None:
        names = tuple(des.state_names[q] for q in kept)
    return Des(
        state_count=len(kept),
        events=des.events,
        transitions=frozenset(
            (remap[p], e, remap[q])
            for (p, e, q) in des.transitions
            if p in seen and q in seen
        ),
        initial=frozenset(remap[q] for q in des.initial),
        secret=frozenset(remap[q] for q in des.secret if q in seen),
        nonsecret=frozenset(remap[q] for q in des.nonsecret if q in seen),
        state_names=names,
    )


def is_deterministic(des: Des) -> bool:
    if len(des.initial) != 1:
        return False
    seen = set()
    for (p, e, _q) in des.transitions:
        if (p, e) in seen:
            return False
        seen.add((p, e))
    return True


def language_equivalent(a: Des, b: Des) -> bool:
    """Equality of the generated (prefix-closed) languages of two deterministic DES.

    Decided by synchronized traversal of the two transition structures,
    comparing which events are defined at each reachable state pair.
    """
    if not is_deterministic(a) or not is_deterministic(b):
        raise ValueError("language equivalence requires deterministic inputs")
    if a.events != b.events:
        raise ValueError("language equivalence requires identical event tables")
    adj_a = _adjacency(a)
    adj_b = _adjacency(b)
    start = (next(iter(a.initial)), next(iter(b.initial)))
    seen = {start}
    queue = deque([start])
    while queue:
        pa, pb = queue.popleft()
        for e in range(len(a.events)):
            ta = adj_a.get((pa, e))
            tb = adj_b.get((pb, e))
            if (ta is None) != (tb is None):
                return False
            if ta is None:
                continue
            pair = (ta[0], tb[0])
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True
