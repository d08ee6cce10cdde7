"""JSON file format for DES descriptions.

A document is a JSON object with fields:

  states:      list of state name strings
  initial:     list of state names
  events:      list of {"name": str, "observable": bool}
  transitions: list of [source, event, target] name triples
  secret:      list of state names
  nonsecret:   list of state names (optional)

Names map to indices in document order, so parse/serialize round-trips
preserve content exactly.
"""

from __future__ import annotations

import json

from .automata import Des, Event, EventTable


class DesFormatError(ValueError):
    """Raised for malformed DES documents, with a specific diagnostic."""


def parse_des(text: str) -> Des:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DesFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DesFormatError("document must be a JSON object")

    states = doc.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise DesFormatError("'states' must be a list of name strings")
    if len(set(states)) != len(states):
        raise DesFormatError("duplicate state name")
    if not states:
        raise DesFormatError("'states' must be nonempty")
    state_index = {s: i for i, s in enumerate(states)}

    raw_events = doc.get("events")
    if not isinstance(raw_events, list) or not raw_events:
        raise DesFormatError("'events' must be a nonempty list")
    entries = []
    seen_events = set()
    for item in raw_events:
        if not isinstance(item, dict) or "name" not in item or "observable" not in item:
            raise DesFormatError("each event needs 'name' and 'observable' fields")
        name = item["name"]
        if not isinstance(name, str) or not name:
            raise DesFormatError("event names must be nonempty strings")
        if name in seen_events:
            raise DesFormatError(f"duplicate event name: {name!r}")
        seen_events.add(name)
        entries.append(Event(name, bool(item["observable"])))
    events = EventTable(tuple(entries))
    event_index = {e.name: i for i, e in enumerate(entries)}

    def resolve_state(name, where):
        if name not in state_index:
            raise DesFormatError(f"unknown state name {name!r} in {where}")
        return state_index[name]

    initial = doc.get("initial")
    if not isinstance(initial, list) or not initial:
        raise DesFormatError("'initial' must be a nonempty list of state names")
    initial_set = frozenset(resolve_state(s, "initial") for s in initial)

    transitions = set()
    for t in doc.get("transitions", []):
        if not (isinstance(t, list) and len(t) == 3):
            raise DesFormatError("each transition must be a [source, event, target] triple")
        src, ev, tgt = t
        if ev not in event_index:
            raise DesFormatError(f"unknown event name {ev!r} in transitions")
        transitions.add((resolve_state(src, "transitions"), event_index[ev], resolve_state(tgt, "transitions")))

    secret = frozenset(resolve_state(s, "secret") for s in doc.get("secret", []))
    nonsecret = frozenset(resolve_state(s, "nonsecret") for s in doc.get("nonsecret", []))
    if secret & nonsecret:
        raise DesFormatError("secret and nonsecret sets intersect")

    return Des(
        state_count=len(states),
        events=events,
        transitions=frozenset(transitions),
        initial=initial_set,
        secret=secret,
        nonsecret=nonsecret,
        state_names=tuple(states),
    )


def serialize_des(des: Des) -> str:
    names = [des.state_name(q) for q in range(des.state_count)]
    doc = {
        "states": names,
        "initial": [names[q] for q in sorted(des.initial)],
        "events": [{"name": e.name, "observable": e.observable} for e in des.events.entries],
        "transitions": [
            [names[p], des.events[e].name, names[q]]
            for (p, e, q) in sorted(des.transitions)
        ],
        "secret": [names[q] for q in sorted(des.secret)],
        "nonsecret": [names[q] for q in sorted(des.nonsecret)],
    }
    return json.dumps(doc, indent=2) + "\n"
