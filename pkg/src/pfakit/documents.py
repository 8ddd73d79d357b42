"""JSON document format for automata.

A document is a JSON object with keys (in canonical order) ``kind``,
optional ``name``, optional ``params``, ``states``, ``alphabet``,
``initial``, ``final``, ``transitions``. Kinds: "pa" (probabilistic), "npa"
(numberless), "pba" (probabilistic with the final set read as a repeated
acceptance condition). Each transition record is {"from", "letter", "to"}
where "to" is either a map target -> probability expression (strings like
"1/2", "x", "1-x") or, for support-only numberless documents, a list of
targets.

Canonical form: two-space indent, transitions sorted by (state order, letter
order), "to" keys in state order, final states in state order, trailing
newline. serialize_document(parse_document(text)) == text for canonical
text; expression strings are preserved verbatim.

Structural problems (bad JSON, wrong shapes) raise ParseError; semantic
problems (unknown ids, bad sums, unbound parameters) raise ValidationError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .core import Distribution, NumberlessAutomaton, ProbAutomaton, instantiate
from .constructions import BuchiAutomaton
from .errors import ParseError, ValidationError

KINDS = ("pa", "npa", "pba")

Targets = Union[Mapping[str, str], Sequence[str]]


@dataclass(frozen=True)
class TransitionRecord:
    source: str
    letter: str
    to: Targets  # dict target -> expression, or tuple of targets

    def __post_init__(self):
        if isinstance(self.to, Mapping):
            object.__setattr__(self, "to", dict(self.to))
        else:
            object.__setattr__(self, "to", tuple(self.to))


@dataclass(frozen=True)
class AutomatonDocument:
    kind: str
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    final: tuple[str, ...]
    transitions: tuple[TransitionRecord, ...]
    name: str | None = None
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "final", tuple(self.final))
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.kind not in KINDS:
            raise ValidationError(f"unknown document kind {self.kind!r}")


# --- expression evaluation ---------------------------------------------------


class _ExprParser:
    """Arithmetic over rationals and named parameters: + - * / ( ) integers."""

    def __init__(self, text: str, bindings: Mapping[str, Fraction]):
        self.text = text
        self.pos = 0
        self.bindings = bindings

    def fail(self, msg: str) -> ValidationError:
        return ValidationError(f"bad expression {self.text!r} at offset {self.pos}: {msg}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Fraction:
        value = self.term()
        while (op := self.peek()) in ("+", "-"):
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Fraction:
        value = self.factor()
        while (op := self.peek()) in ("*", "/"):
            self.pos += 1
            rhs = self.factor()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise self.fail("division by zero")
                value /= rhs
        return value

    def factor(self) -> Fraction:
        if self.peek() == "-":
            self.pos += 1
            return -self.factor()
        return self.atom()

    def atom(self) -> Fraction:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise self.fail("expected ')'")
            self.pos += 1
            return value
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Fraction(int(self.text[start : self.pos]))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.bindings:
                raise ValidationError(
                    f"unbound parameter {name!r} in expression {self.text!r}"
                )
            return Fraction(self.bindings[name])
        raise self.fail("expected a number, name, or '('")


def eval_expression(text: str, bindings: Mapping[str, Fraction] | None = None) -> Fraction:
    """Evaluate a probability expression ("1/2", "1-x", "x*y+1/4") exactly."""
    if not isinstance(text, str) or not text.strip():
        raise ValidationError(f"expression must be a nonempty string, got {text!r}")
    parser = _ExprParser(text, bindings or {})
    value = parser.expr()
    if parser.peek():
        raise parser.fail("trailing input")
    return value


# --- parsing -----------------------------------------------------------------


def _need(obj: Mapping, key: str, kind: type, what: str):
    if key not in obj:
        raise ParseError(f"{what}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ParseError(f"{what}: key {key!r} must be {kind.__name__}")
    return value


def _str_list(obj: Mapping, key: str, what: str) -> list[str]:
    value = _need(obj, key, list, what)
    if not all(isinstance(x, str) for x in value):
        raise ParseError(f"{what}: {key!r} entries must be strings")
    return value


def parse_document(text: str) -> AutomatonDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    kind = _need(raw, "kind", str, "document")
    if kind not in KINDS:
        raise ParseError(f"document: kind must be one of {', '.join(KINDS)}")
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("document: name must be a string")
    params = raw.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise ParseError("document: params must be a list of strings")
    states = _str_list(raw, "states", "document")
    alphabet = _str_list(raw, "alphabet", "document")
    initial = _need(raw, "initial", str, "document")
    final = _str_list(raw, "final", "document")
    records_raw = _need(raw, "transitions", list, "document")
    records: list[TransitionRecord] = []
    for i, rec in enumerate(records_raw):
        what = f"transition {i}"
        if not isinstance(rec, dict):
            raise ParseError(f"{what}: must be an object")
        src = _need(rec, "from", str, what)
        letter = _need(rec, "letter", str, what)
        if "to" not in rec:
            raise ParseError(f"{what}: missing key 'to'")
        to = rec["to"]
        if isinstance(to, dict):
            if not all(isinstance(k, str) and isinstance(v, str) for k, v in to.items()):
                raise ParseError(f"{what}: 'to' map must be state -> expression string")
        elif isinstance(to, list):
            if kind != "npa":
                raise ParseError(f"{what}: target lists are only allowed in npa documents")
            if not all(isinstance(t, str) for t in to):
                raise ParseError(f"{what}: 'to' list entries must be strings")
        else:
            raise ParseError(f"{what}: 'to' must be a map or a list")
        records.append(TransitionRecord(src, letter, to))
    return AutomatonDocument(
        kind=kind,
        states=tuple(states),
        alphabet=tuple(alphabet),
        initial=initial,
        final=tuple(final),
        transitions=tuple(records),
        name=name,
        params=tuple(params),
    )


# --- document -> automaton ---------------------------------------------------

Automaton = Union[ProbAutomaton, NumberlessAutomaton, BuchiAutomaton]


def document_to_automaton(
    doc: AutomatonDocument,
    bindings: Mapping[str, Fraction] | None = None,
) -> Automaton:
    """Build the validated automaton a document denotes.

    A numberless document without bindings yields a NumberlessAutomaton; with
    bindings its expressions are evaluated and the result instantiated.
    "pa"/"pba" documents always evaluate expressions (bindings optional).
    """
    state_set = set(doc.states)
    for rec in doc.transitions:
        if rec.source not in state_set:
            raise ValidationError(f"transition from unknown state {rec.source!r}")
        targets = rec.to if isinstance(rec.to, tuple) else rec.to.keys()
        for t in targets:
            if t not in state_set:
                raise ValidationError(f"transition to unknown state {t!r}")

    if doc.kind == "npa" and bindings is None:
        support = set()
        for rec in doc.transitions:
            targets = rec.to if isinstance(rec.to, tuple) else rec.to.keys()
            for t in targets:
                support.add((rec.source, rec.letter, t))
        return NumberlessAutomaton(
            doc.states, doc.alphabet, doc.initial, frozenset(support), frozenset(doc.final)
        )

    delta: dict[tuple[str, str], Distribution] = {}
    for rec in doc.transitions:
        if not isinstance(rec.to, dict):
            raise ValidationError(
                f"({rec.source!r}, {rec.letter!r}) lists support only; it cannot "
                "be instantiated with parameter bindings"
            )
        pair = (rec.source, rec.letter)
        if pair in delta:
            raise ValidationError(f"duplicate transition record for {pair!r}")
        entries = {
            t: eval_expression(expr, bindings) for t, expr in rec.to.items()
        }
        delta[pair] = Distribution(entries)

    if doc.kind == "npa":
        support = frozenset(
            (s, c, t) for (s, c), d in delta.items() for t in d.support()
        )
        npa = NumberlessAutomaton(
            doc.states, doc.alphabet, doc.initial, support, frozenset(doc.final)
        )
        return instantiate(npa, delta)
    pa = ProbAutomaton(doc.states, doc.alphabet, doc.initial, delta, frozenset(doc.final))
    if doc.kind == "pba":
        return BuchiAutomaton(pa, frozenset(doc.final))
    return pa


def parse_automaton(
    text: str, bindings: Mapping[str, Fraction] | None = None
) -> Automaton:
    return document_to_automaton(parse_document(text), bindings)


# --- automaton -> document ---------------------------------------------------


def automaton_to_document(obj: Automaton, name: str | None = None) -> AutomatonDocument:
    if isinstance(obj, BuchiAutomaton):
        pa = obj.automaton
        kind = "pba"
        final = obj.accepting
    elif isinstance(obj, ProbAutomaton):
        pa = obj
        kind = "pa"
        final = obj.final
    elif isinstance(obj, NumberlessAutomaton):
        order = {s: i for i, s in enumerate(obj.states)}
        records = []
        for s in obj.states:
            for c in obj.alphabet:
                records.append(TransitionRecord(s, c, obj.targets(s, c)))
        return AutomatonDocument(
            kind="npa",
            states=obj.states,
            alphabet=obj.alphabet,
            initial=obj.initial,
            final=tuple(sorted(obj.final, key=order.__getitem__)),
            transitions=tuple(records),
            name=name,
        )
    else:
        raise ValidationError(f"cannot serialize object of type {type(obj).__name__}")
    order = {s: i for i, s in enumerate(pa.states)}
    records = []
    for s in pa.states:
        for c in pa.alphabet:
            d = pa.delta[(s, c)]
            records.append(
                TransitionRecord(s, c, {t: str(p) for t, p in d.items()})
            )
    return AutomatonDocument(
        kind=kind,
        states=pa.states,
        alphabet=pa.alphabet,
        initial=pa.initial,
        final=tuple(sorted(final, key=order.__getitem__)),
        transitions=tuple(records),
        name=name,
    )


def serialize_document(doc: AutomatonDocument) -> str:
    """Canonical rendering: fixed key order, sorted transitions, 2-space
    indent, trailing newline."""
    order = {s: i for i, s in enumerate(doc.states)}
    letter_order = {c: i for i, c in enumerate(doc.alphabet)}
    for rec in doc.transitions:
        if rec.source not in order:
            raise ValidationError(f"transition from unknown state {rec.source!r}")
        if rec.letter not in letter_order:
            raise ValidationError(f"transition on unknown letter {rec.letter!r}")
    out: dict[str, object] = {"kind": doc.kind}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.params:
        out["params"] = list(doc.params)
    out["states"] = list(doc.states)
    out["alphabet"] = list(doc.alphabet)
    out["initial"] = doc.initial
    out["final"] = sorted(doc.final, key=lambda s: order.get(s, len(order)))
    records = sorted(
        doc.transitions, key=lambda r: (order[r.source], letter_order[r.letter])
    )
    rendered = []
    for rec in records:
        if isinstance(rec.to, tuple):
            to: object = sorted(rec.to, key=lambda t: order.get(t, len(order)))
        else:
            to = {
                t: rec.to[t]
                for t in sorted(rec.to, key=lambda t: order.get(t, len(order)))
            }
        rendered.append({"from": rec.source, "letter": rec.letter, "to": to})
    out["transitions"] = rendered
    return json.dumps(out, indent=2) + "\n"


def serialize_automaton(obj: Automaton, name: str | None = None) -> str:
    return serialize_document(automaton_to_document(obj, name=name))
