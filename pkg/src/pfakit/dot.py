"""Graphviz DOT rendering of automata.

Deterministic output: nodes in declaration order, one merged edge per
(source, target) pair with letter labels stacked in alphabet order. Final
states are drawn as double circles; an invisible point marks the initial
state. Probabilistic edges are labeled "letter, p/q"; numberless edges with
letters only.
"""

from __future__ import annotations

from typing import Union

from .core import NumberlessAutomaton, ProbAutomaton
from .constructions import BuchiAutomaton


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _quote_label(fragments: list[str]) -> str:
    # stacked label: literal \n separators must survive, so escape quotes only
    return '"' + "\\n".join(f.replace('"', '\\"') for f in fragments) + '"'


def export_dot(obj: Union[ProbAutomaton, NumberlessAutomaton, BuchiAutomaton]) -> str:
    if isinstance(obj, BuchiAutomaton):
        obj = obj.automaton
    lines = [
        "digraph automaton {",
        "  rankdir=LR;",
        "  node [shape=circle];",
        '  __init__ [shape=point, style=invis, label=""];',
    ]
    for s in obj.states:
        shape = "doublecircle" if s in obj.final else "circle"
        lines.append(f"  {_quote(s)} [shape={shape}];")
    lines.append(f"  __init__ -> {_quote(obj.initial)};")

    order = {s: i for i, s in enumerate(obj.states)}
    # labels[(src, tgt)] = list of per-letter label fragments, alphabet order
    labels: dict[tuple[str, str], list[str]] = {}
    if isinstance(obj, ProbAutomaton):
        for s in obj.states:
            for c in obj.alphabet:
                for t, p in obj.delta[(s, c)].items():
                    labels.setdefault((s, t), []).append(f"{c}, {p}")
    else:
        for s in obj.states:
            for c in obj.alphabet:
                for t in obj.targets(s, c):
                    labels.setdefault((s, t), []).append(c)
    for (s, t) in sorted(labels, key=lambda st: (order[st[0]], order[st[1]])):
        lines.append(f"  {_quote(s)} -> {_quote(t)} [label={_quote_label(labels[(s, t)])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
