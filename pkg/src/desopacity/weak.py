"""Verification of weak k-step opacity.

The verifier harvests seed pairs (secret state, nonsecret estimate) from
the observer, then runs a level-bounded breadth-first search over the lazy
product of the projected automaton with the full-observer dynamics.  The
system is opaque iff no product state with an empty estimate is reachable
from a seed within k observable steps.

The BFS keeps a single level counter travelling through the queue instead
of a per-vertex distance array, so its memory does not grow with k.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from .automata import (
    SINK,
    Des,
    Estimate,
    ObserverAutomaton,
    _adjacency,
    observer,
    project,
)

# k is a nonnegative int or INFINITE.
KBound = Union[int, float]
INFINITE: KBound = math.inf


def check_k(k: KBound) -> KBound:
    if k is INFINITE or k == math.inf:
        return INFINITE
    if isinstance(k, int) and k >= 0:
        return k
    raise ValueError("k must be a nonnegative integer or INFINITE")


class _Level:
    """Level counter threaded through the BFS queue."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


@dataclass(frozen=True)
class Seed:
    """A pair (secret state, nonsecret estimate) with its provenance.

    ``mu`` is a shortest observation reaching ``origin_estimate`` in the
    observer, ties broken by event-table order.
    """

    secret_state: int
    nonsecret_estimate: Estimate
    origin_estimate: frozenset
    mu: tuple


@dataclass(frozen=True)
class Witness:
    """An opacity violation at observation level: after observing ``mu`` the
    system may be in ``secret_state``, and the continuation ``nu`` has no
    matching run through a nonsecret state."""

    mu: tuple
    secret_state: int
    nu: tuple
    origin_estimate: frozenset


@dataclass(frozen=True)
class VerifyStats:
    observer_states: int
    h_states: int
    product_states_explored: int
    bfs_depth_reached: int


@dataclass(frozen=True)
class Verdict:
    opaque: bool
    witness: Optional[Witness]
    stats: VerifyStats

    def __post_init__(self):
        if self.opaque == (self.witness is not None):
            raise ValueError("witness must be present exactly when not opaque")


def shortest_observations(obs: ObserverAutomaton) -> tuple:
    """Shortest observation reaching each observer state, by BFS in event order."""
    mus = [None] * len(obs.states)
    mus[0] = ()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j, name in enumerate(obs.event_names):
            t = obs.delta[i][j]
            if t is not None and mus[t] is None:
                mus[t] = mus[i] + (name,)
                queue.append(t)
    return tuple(mus)


def compute_seeds(obs: ObserverAutomaton, secret: frozenset, nonsecret: frozenset) -> list:
    """One seed per (reachable estimate X, secret state in X)."""
    mus = shortest_observations(obs)
    seeds = []
    for i, x in enumerate(obs.states):
        secrets = x & secret
        if not secrets:
            continue
        ns = x & nonsecret
        z = frozenset(ns) if ns else SINK
        for q in sorted(secrets):
            seeds.append(Seed(q, z, x, mus[i]))
    return seeds


def bounded_bfs(successors: Callable, seeds: Iterable, k: KBound):
    """Mark all vertices within distance k of the seeds.

    ``successors(v)`` yields (label, vertex) pairs.  Returns (marked, depth)
    where ``marked`` maps each vertex to its parent link (parent vertex,
    label) or None for seeds, in discovery order; ``depth`` is the last
    completed level.  A single level counter is threaded through the queue,
    so only one distance number exists at any time.
    """
    k = check_k(k)
    marked = {}
    queue = deque()
    queue.append(_Level(0))
    for s in seeds:
        if s not in marked:
            marked[s] = None
            queue.append(s)
    level = 0
    while queue:
        u = queue.popleft()
        if isinstance(u, _Level):
            if not queue:  # no frontier left at this level
                break
            level = u.value
            if level == k:
                break
            queue.append(_Level(level + 1))
            continue
        for label, v in successors(u):
            if v not in marked:
                marked[v] = (u, label)
                queue.append(v)
    return marked, level


def _clamp_k(k: KBound, des: Des) -> KBound:
    # Verdicts stabilize at n * 2^n steps; clamping avoids huge counters.
    if k is not INFINITE and k > des.state_count * (2 ** des.state_count):
        return INFINITE
    return k


def verify_weak(des: Des, k: KBound) -> Verdict:
    """Decide weak k-step opacity, with a validated witness on violation."""
    k = _clamp_k(check_k(k), des)
    obs = observer(des)
    pg = project(des)
    adj = _adjacency(pg)
    events = tuple(range(len(pg.events)))
    seeds = compute_seeds(obs, des.secret, des.nonsecret)

    # Deduplicate seeds on (x, Z); keep the lexicographically-first mu.
    by_pair = {}
    for s in seeds:
        key = (s.secret_state, s.nonsecret_estimate)
        prev = by_pair.get(key)
        if prev is None or (len(s.mu), s.mu) < (len(prev.mu), prev.mu):
            by_pair[key] = s

    h_sets = {s.nonsecret_estimate for s in by_pair.values() if s.nonsecret_estimate is not SINK}

    sink_seeds = [s for s in seeds if s.nonsecret_estimate is SINK]
    if sink_seeds:
        # Every run reaching such an estimate already reveals the secret.
        s = min(sink_seeds, key=lambda s: (len(s.mu), s.mu, s.secret_state))
        stats = VerifyStats(len(obs.states), len(h_sets), len(by_pair), 0)
        return Verdict(False, Witness(s.mu, s.secret_state, (), s.origin_estimate), stats)

    z_step = {}

    def step_estimate(z, e):
        key = (z, e)
        out = z_step.get(key)
        if out is None:
            targets = set()
            for q in z:
                targets.update(adj.get((q, e), ()))
            out = frozenset(targets) if targets else SINK
            z_step[key] = out
            if out is not SINK:
                h_sets.add(out)
        return out

    def successors(v):
        q, z = v
        for e in events:
            q_targets = adj.get((q, e))
            if not q_targets:
                continue
            z2 = SINK if z is SINK else step_estimate(z, e)
            for q2 in q_targets:
                yield pg.events[e].name, (q2, z2)

    roots = {(s.secret_state, s.nonsecret_estimate): s for s in by_pair.values()}
    marked, depth = bounded_bfs(successors, list(roots), k)

    n = des.state_count
    assert len(marked) <= n * 2 ** n, "product exploration exceeded the n*2^n bound"

    stats = VerifyStats(len(obs.states), len(h_sets), len(marked), depth)
    for v in marked:
        if v[1] is SINK:
            nu = []
            cur = v
            while marked[cur] is not None:
                cur, label = marked[cur][0], marked[cur][1]
                nu.append(label)
            nu.reverse()
            seed = roots[cur]
            return Verdict(False, Witness(seed.mu, seed.secret_state, tuple(nu), seed.origin_estimate), stats)
    return Verdict(True, None, stats)


def verify_current_state_opacity(des: Des) -> Verdict:
    """Current-state opacity, decided directly on the observer.

    Equivalent to weak 0-step opacity; kept independent of the product
    machinery as an internal cross-check.
    """
    if des.secret & des.nonsecret:
        raise ValueError("secret and nonsecret state sets must be disjoint")
    obs = observer(des)
    mus = shortest_observations(obs)
    for i, x in enumerate(obs.states):
        secrets = x & des.secret
        if secrets and not (x & des.nonsecret):
            stats = VerifyStats(len(obs.states), 0, 0, 0)
            return Verdict(False, Witness(mus[i], min(secrets), (), x), stats)
    return Verdict(True, None, VerifyStats(len(obs.states), 0, 0, 0))
