"""DOT (Graphviz) export for DES and observer automata.

The observer's empty-estimate sink and its incoming transitions are not
drawn; secret states are double-circled.
"""

from __future__ import annotations

from .automata import Des, ObserverAutomaton


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def des_to_dot(des: Des, title: str = "G") -> str:
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for q in range(des.state_count):
        shape = "doublecircle" if q in des.secret else "circle"
        lines.append(f"  n{q} [shape={shape}, label={_quote(des.state_name(q))}];")
    for q in sorted(des.initial):
        lines.append(f"  __init -> n{q};")
    for (p, e, q) in sorted(des.transitions):
        name = des.events[e].name
        label = name if des.events[e].observable else name + " (uo)"
        lines.append(f"  n{p} -> n{q} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def observer_to_dot(obs: ObserverAutomaton, des: Des, title: str = "observer") -> str:
    def estimate_label(x):
        return "{" + ",".join(des.state_name(q) for q in sorted(x)) + "}"

    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for i, x in enumerate(obs.states):
        lines.append(f"  s{i} [shape=circle, label={_quote(estimate_label(x))}];")
    lines.append("  __init -> s0;")
    for i, row in enumerate(obs.delta):
        for j, t in enumerate(row):
            if t is None:
                continue  # transitions into the empty-estimate sink are omitted
            lines.append(f"  s{i} -> s{t} [label={_quote(obs.event_names[j])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
