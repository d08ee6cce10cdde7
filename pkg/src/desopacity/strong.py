"""Verification of strong k-step opacity by reduction to the weak verifier.

Strong opacity is defined for deterministic systems without neutral states.
A system that has unobservable transitions from secret to nonsecret states
is first normalized (those transitions are redirected into a secret copy of
the state space).  The normalized system is then transformed: a nonsecret
copy of its nonsecret part is attached through a fresh unobservable event,
all original states become secret, and weak k-step opacity of the result
coincides with strong k-step opacity of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .automata import (
    Des,
    Event,
    EventTable,
    accessible,
    is_deterministic,
    unobservable_reach,
)
from .weak import KBound, Verdict, verify_weak


@dataclass(frozen=True)
class NormalizationResult:
    des_n: Des
    prime_map: dict  # original state -> index of its surviving secret copy
    original_count: int


@dataclass(frozen=True)
class ReductionResult:
    des_prime: Des
    fresh_event: str
    copy_map: dict  # nonsecret original state -> index of its nonsecret copy


def _require_no_neutral(des: Des) -> None:
    if len(des.secret | des.nonsecret) != des.state_count:
        raise ValueError("strong opacity requires every state to be secret or nonsecret")


def is_normal(des: Des) -> bool:
    """True iff no unobservable transition leaves a secret state into a nonsecret one."""
    unobs = set(des.events.unobservable_indices())
    for (p, e, q) in des.transitions:
        if e in unobs and p in des.secret and q not in des.secret:
            return False
    return True


def _reachable(des: Des) -> set:
    adj = {}
    for (p, _e, q) in des.transitions:
        adj.setdefault(p, set()).add(q)
    seen = set(des.initial)
    work = list(seen)
    while work:
        p = work.pop()
        for q in adj.get(p, ()):
            if q not in seen:
                seen.add(q)
                work.append(q)
    return seen


def _prime_names(des: Des) -> tuple:
    names = [des.state_name(q) for q in range(des.state_count)]
    used = set(names)
    primes = []
    for base in names:
        cand = base + "'"
        while cand in used:
            cand += "'"
        used.add(cand)
        primes.append(cand)
    return tuple(names), tuple(primes)


def normalize(des: Des) -> NormalizationResult:
    """Redirect unobservable secret-to-nonsecret transitions into a secret copy.

    The copy of state q is q + n before pruning.  Steps: (1) redirect the
    offending transitions to the copies, (2) copy every unobservable
    transition between copies, (3) let copies rejoin the originals on
    observable events, (4) prune unreachable states.
    """
    if not is_deterministic(des):
        raise ValueError("normalization requires a deterministic input")
    _require_no_neutral(des)
    n = des.state_count
    unobs = set(des.events.unobservable_indices())
    delta = set()
    for (p, e, q) in des.transitions:
        if e in unobs and p in des.secret and q in des.nonsecret:
            delta.add((p, e, q + n))  # step (1)
        else:
            delta.add((p, e, q))
    for (p, e, q) in des.transitions:
        if e in unobs:
            delta.add((p + n, e, q + n))  # step (2)
        else:
            delta.add((p + n, e, q))  # step (3)
    names, primes = _prime_names(des)
    doubled = Des(
        state_count=2 * n,
        events=des.events,
        transitions=frozenset(delta),
        initial=des.initial,
        secret=des.secret | frozenset(range(n, 2 * n)),
        nonsecret=des.nonsecret,
        state_names=names + primes,
    )
    # step (4): prune, relying on the order-preserving dense reindexing
    trimmed = accessible(doubled)
    survivors = sorted(_reachable(doubled))
    old_to_new = {old: new for new, old in enumerate(survivors)}
    prime_map = {q: old_to_new[q + n] for q in range(n) if q + n in old_to_new}

    assert is_deterministic(trimmed), "normalization must preserve determinism"
    reach = unobservable_reach(trimmed, trimmed.secret)
    assert not (reach - trimmed.secret), (
        "normalized system has a nonsecret state in the unobservable reach of a secret state"
    )
    return NormalizationResult(trimmed, prime_map, n)


def _fresh_event_name(events: EventTable) -> str:
    taken = set(events.names)
    if "u" not in taken:
        return "u"
    i = 1
    while f"u{i}" in taken:
        i += 1
    return f"u{i}"


def strong_to_weak(des: Des) -> ReductionResult:
    """Attach a nonsecret copy of the nonsecret part via a fresh unobservable event.

    In the result all original states are secret and exactly the copies are
    nonsecret, so a weak violation means some run cannot hide its visit to a
    secret state during the last k observable steps.
    """
    if not is_deterministic(des):
        raise ValueError("the strong-to-weak transformation requires a deterministic input")
    _require_no_neutral(des)
    if not is_normal(des):
        raise ValueError("the strong-to-weak transformation requires a normal input")
    n = des.state_count
    ns_sorted = sorted(des.nonsecret)
    copy_map = {q: n + i for i, q in enumerate(ns_sorted)}
    fresh = _fresh_event_name(des.events)
    events = EventTable(des.events.entries + (Event(fresh, False),))
    fresh_index = len(des.events)
    delta = set(des.transitions)
    for (p, e, q) in des.transitions:
        if p in copy_map and q in copy_map:
            delta.add((copy_map[p], e, copy_map[q]))
    for q in ns_sorted:
        delta.add((q, fresh_index, copy_map[q]))
    names, primes = _prime_names(des)
    state_names = names + tuple(primes[q] for q in ns_sorted)
    des_prime = Des(
        state_count=n + len(ns_sorted),
        events=events,
        transitions=frozenset(delta),
        initial=des.initial,
        secret=frozenset(range(n)),
        nonsecret=frozenset(copy_map.values()),
        state_names=state_names,
    )
    return ReductionResult(des_prime, fresh, copy_map)


def reduce_to_weak(des: Des) -> tuple:
    """Normalization (skipped for already-normal inputs) followed by the
    strong-to-weak transformation.  Returns (normalization or None, reduction)."""
    if not is_deterministic(des):
        raise ValueError("strong opacity is defined for deterministic systems only")
    _require_no_neutral(des)
    norm: Optional[NormalizationResult] = None
    base = des
    if not is_normal(des):
        norm = normalize(des)
        base = norm.des_n
    return norm, strong_to_weak(base)


def verify_strong(des: Des, k: KBound) -> Verdict:
    """Decide strong k-step opacity via the weak verifier.

    The witness, if any, refers to the transformed system; its observation
    strings are over the original observable alphabet.
    """
    _norm, reduction = reduce_to_weak(des)
    return verify_weak(reduction.des_prime, k)
