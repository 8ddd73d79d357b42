"""Automaton-to-automaton compilers.

Three constructions live here, plus their word-level encodings:

* :func:`fair_coin` turns a simple automaton (probabilities in {1/2, 1}) into a
  biased-coin automaton whose only probabilities are lambda and 1 - lambda. A
  two-sharp gadget replaces every transition: each pair of ``#`` letters either
  commits the pending transition or retries, so padding a word with ``#`` pairs
  recovers the original semantics up to the factor :func:`commit_prob`.
* :func:`build_simulation` compresses the whole biased-coin family into one
  support automaton with a single probabilistic transition. Probed words
  (:func:`hat`) drive it through check/apply micro-steps; an embedded
  deterministic checker (:func:`fairness_dfa`) polices the probe format.
* :func:`buchi_reduction` lifts a finite-word automaton to an infinite-word
  one by adding a restart letter ``#`` from accepting states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    Distribution,
    NumberlessAutomaton,
    ProbAutomaton,
    dirac,
    instantiate,
    require_simple,
)
from .errors import (
    AlphabetClash,
    DomainError,
    OrderMismatch,
    UnknownLetter,
    ValidationError,
)

SHARP = "#"
DOLLAR = "$"
NEXT_TRANSITION = "next_transition"
NEXT_WORD = "next_word"


def check_letter(b: str, q: str) -> str:
    """The probe letter that challenges state q on base letter b."""
    return f"check({b},{q})"


def apply_letter(b: str, q: str) -> str:
    """The probe letter that fires the pending (q, b) transition."""
    return f"apply({b},{q})"


def parse_sim_letter(token: str) -> tuple[str, ...]:
    """Split a probe-alphabet token into its kind and arguments."""
    if token == DOLLAR:
        return ("dollar",)
    if token == NEXT_TRANSITION:
        return ("next_transition",)
    if token == NEXT_WORD:
        return ("next_word",)
    for kind in ("check", "apply"):
        prefix = kind + "("
        if token.startswith(prefix) and token.endswith(")"):
            body = token[len(prefix):-1]
            b, sep, q = body.partition(",")
            if sep and b and q:
                return (kind, b, q)
    return ("base", token)


def commit_prob(lam: Fraction, rounds: int) -> Fraction:
    """Probability that the two-sharp gadget commits within ``rounds`` retries.

    One retry commits with probability 2*lam*(1-lam), so this is
    1 - (1 - 2*lam*(1-lam))**rounds. Requires 0 < lam < 1 and rounds >= 0.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise DomainError(f"lam must lie strictly between 0 and 1, got {lam}")
    if rounds < 0:
        raise DomainError(f"rounds must be >= 0, got {rounds}")
    return 1 - (1 - 2 * lam * (1 - lam)) ** rounds


def _fresh(name: str, used: set[str]) -> str:
    while name in used:
        name += "'"
    used.add(name)
    return name


@dataclass(frozen=True)
class _CoinSkeleton:
    """Shared layout of the biased-coin automaton, before numbers are chosen.

    ``branch`` maps every (state, letter) pair to its (lam-target,
    (1-lam)-target) pair; deterministic moves repeat the same target twice.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    final: frozenset[str]
    branch: Mapping[tuple[str, str], tuple[str, str]]
    gadget: Mapping[tuple[str, str], tuple[str, str, str]]
    sink: str


def _coin_skeleton(a: ProbAutomaton) -> _CoinSkeleton:
    require_simple(a)
    if SHARP in a.alphabet:
        raise AlphabetClash(f"source alphabet already contains {SHARP!r}")
    used = set(a.states)
    states = list(a.states)
    gadget: dict[tuple[str, str], tuple[str, str, str]] = {}
    for q in a.states:
        for b in a.alphabet:
            mid = _fresh(f"{q}@{b}", used)
            left = _fresh(f"{q}@{b}:L", used)
            right = _fresh(f"{q}@{b}:R", used)
            gadget[(q, b)] = (mid, left, right)
            states += [mid, left, right]
    sink = _fresh("sink", used)
    states.append(sink)

    alphabet = a.alphabet + (SHARP,)
    branch: dict[tuple[str, str], tuple[str, str]] = {}
    for q in a.states:
        branch[(q, SHARP)] = (q, q)  # original states idle on sharps
        for b in a.alphabet:
            mid, left, right = gadget[(q, b)]
            branch[(q, b)] = (mid, mid)
            # Sorted support: the lam branch of the gadget retries via `left`,
            # ultimately landing on the first target; the other lands on the second.
            targets = [t for t, _ in a.delta[(q, b)].items()]
            t_first, t_second = (targets[0], targets[-1])
            branch[(mid, SHARP)] = (left, right)
            branch[(left, SHARP)] = (mid, t_first)
            branch[(right, SHARP)] = (t_second, mid)
            for c in a.alphabet:
                branch[(mid, c)] = (sink, sink)
                branch[(left, c)] = (sink, sink)
                branch[(right, c)] = (sink, sink)
    for c in alphabet:
        branch[(sink, c)] = (sink, sink)
    return _CoinSkeleton(
        tuple(states), alphabet, a.initial, a.final, branch, gadget, sink
    )


@dataclass(frozen=True)
class FairCoinOutput:
    """Result of :func:`fair_coin`: the compiled automaton plus bookkeeping.

    ``gadget`` maps each original (state, letter) pair to its three helper
    states (pending, retry-left, retry-right).
    """

    automaton: ProbAutomaton
    lam: Fraction
    gadget: Mapping[tuple[str, str], tuple[str, str, str]]
    sink: str


def fair_coin(a: ProbAutomaton, lam: Fraction) -> FairCoinOutput:
    """Compile a simple automaton to one whose probabilities are all lam or 1-lam.

    Every (state, letter) move of ``a`` becomes a deterministic hop into a
    pending state followed by ``#``-driven retry rounds; each round commits
    with probability 2*lam*(1-lam), splitting committed mass evenly between
    the move's targets. Initial and final states carry over unchanged.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise DomainError(f"lam must lie strictly between 0 and 1, got {lam}")
    skel = _coin_skeleton(a)
    delta: dict[tuple[str, str], Distribution] = {}
    dirac_cache = {s: dirac(s) for s in skel.states}
    for (s, c), (t_lam, t_other) in skel.branch.items():
        if t_lam == t_other:
            delta[(s, c)] = dirac_cache[t_lam]
        else:
            delta[(s, c)] = Distribution({t_lam: lam, t_other: 1 - lam})
    pa = ProbAutomaton(skel.states, skel.alphabet, skel.initial, delta, skel.final)
    return FairCoinOutput(pa, lam, skel.gadget, skel.sink)


def encode_word(word: Sequence[str], k: int) -> list[str]:
    """Pad each letter with 2k sharps: the word the coin automaton expects."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    out: list[str] = []
    for a in word:
        out.append(a)
        out.extend([SHARP] * (2 * k))
    return out


def erase_sharps(word: Sequence[str]) -> list[str]:
    """Drop every sharp, recovering the base word."""
    return [a for a in word if a != SHARP]


def _check_order(order: Sequence[str]) -> tuple[str, ...]:
    order = tuple(order)
    if not order:
        raise OrderMismatch("state enumeration is empty")
    if len(set(order)) != len(order):
        raise OrderMismatch("state enumeration has duplicates")
    return order


def hat(word: Sequence[str], order: Sequence[str]) -> list[str]:
    """Encode a coin-automaton word as a probe word.

    Each letter b becomes one check/dollar/apply triple per state of ``order``
    (in that order) followed by ``next_transition``; 3*len(order)+1 probe
    letters per base letter.
    """
    order = _check_order(order)
    out: list[str] = []
    for b in word:
        for q in order:
            out += [check_letter(b, q), DOLLAR, apply_letter(b, q)]
        out.append(NEXT_TRANSITION)
    return out


def unhat(word: Sequence[str], order: Sequence[str]) -> list[str] | None:
    """Decode a probe word back to a coin-automaton word, or None if malformed."""
    order = _check_order(order)
    n = len(order)
    span = 3 * n + 1
    if len(word) % span:
        return None
    decoded: list[str] = []
    for g in range(0, len(word), span):
        block = word[g : g + span]
        kind = parse_sim_letter(block[0])
        if kind[0] != "check":
            return None
        b = kind[1]
        expected = hat([b], order)
        if list(block) != expected:
            return None
        decoded.append(b)
    return decoded


def sim_alphabet(b_alphabet: Sequence[str], order: Sequence[str]) -> tuple[str, ...]:
    """The probe alphabet: all check/apply pairs plus the three control letters."""
    order = _check_order(order)
    letters = [check_letter(b, q) for b in b_alphabet for q in order]
    letters += [apply_letter(b, q) for b in b_alphabet for q in order]
    letters += [DOLLAR, NEXT_TRANSITION, NEXT_WORD]
    return tuple(letters)


def fairness_dfa(b_alphabet: Sequence[str], order: Sequence[str]) -> ProbAutomaton:
    """The deterministic checker for well-formed probe words.

    Accepts exactly the words of the shape (hat(u) + [next_word])* over the
    probe alphabet: per base letter a full check/dollar/apply sweep through
    ``order`` ending in next_transition, with groups of letters closed off by
    next_word. States are 0/1 deterministic; the start state is the single
    accepting state. Any deviation falls into a dead sink.
    """
    order = _check_order(order)
    b_alphabet = tuple(b_alphabet)
    if len(set(b_alphabet)) != len(b_alphabet):
        raise ValidationError("duplicate letters in the base alphabet")
    alphabet = sim_alphabet(b_alphabet, order)
    n = len(order)

    start = "D:start"
    boundary = "D:end"
    sink = "D:sink"
    # Per base letter b, one state per position in the expected sweep
    # check(b,q0) $ apply(b,q0) check(b,q1) ... apply(b,q_{n-1}) next_transition;
    # the state name records the letter just consumed.
    want_dollar = {b: [f"D:{b}:{i}:dollar" for i in range(n)] for b in b_alphabet}
    want_apply = {b: [f"D:{b}:{i}:apply" for i in range(n)] for b in b_alphabet}
    want_check = {b: [f"D:{b}:{i}:check" for i in range(1, n)] for b in b_alphabet}
    want_next = {b: f"D:{b}:next" for b in b_alphabet}
    states = [start, boundary, sink]
    for b in b_alphabet:
        for i in range(n):
            states.append(want_dollar[b][i])
            states.append(want_apply[b][i])
            if i + 1 < n:
                states.append(want_check[b][i])
        states.append(want_next[b])

    goto: dict[tuple[str, str], str] = {}
    for opener in (start, boundary):
        goto[(opener, NEXT_WORD)] = start
        for b in b_alphabet:
            goto[(opener, check_letter(b, order[0]))] = want_dollar[b][0]
    for b in b_alphabet:
        for i in range(n):
            goto[(want_dollar[b][i], DOLLAR)] = want_apply[b][i]
            if i + 1 < n:
                goto[(want_apply[b][i], apply_letter(b, order[i]))] = want_check[b][i]
                goto[(want_check[b][i], check_letter(b, order[i + 1]))] = want_dollar[b][i + 1]
            else:
                goto[(want_apply[b][i], apply_letter(b, order[i]))] = want_next[b]
        goto[(want_next[b], NEXT_TRANSITION)] = boundary

    delta: dict[tuple[str, str], Distribution] = {}
    dirac_cache = {s: dirac(s) for s in states}
    for s in states:
        for c in alphabet:
            delta[(s, c)] = dirac_cache[goto.get((s, c), sink)]
    return ProbAutomaton(tuple(states), alphabet, start, delta, frozenset({start}))


def run_deterministic(dfa: ProbAutomaton, word: Sequence[str]) -> str:
    """Walk a 0/1-probability automaton; returns the end state."""
    letters = dfa.letter_set()
    state = dfa.initial
    for c in word:
        if c not in letters:
            raise UnknownLetter(f"letter {c!r} not in the checker's alphabet")
        items = dfa.delta[(state, c)].items()
        if len(items) != 1:
            raise ValidationError(f"({state!r}, {c!r}) is not deterministic")
        state = items[0][0]
    return state


def dfa_accepts(dfa: ProbAutomaton, word: Sequence[str]) -> bool:
    return run_deterministic(dfa, word) in dfa.final


@dataclass(frozen=True)
class SimulationNPA:
    """The single-coin simulation automaton, with its bookkeeping.

    ``npa`` has exactly one probabilistic (multi-target) pair: (coin, $) with
    support {heads, tails, skip}. ``state_order`` is the coin-automaton state
    enumeration that :func:`hat` and the embedded checker agree on.
    """

    npa: NumberlessAutomaton
    state_order: tuple[str, ...]
    b_alphabet: tuple[str, ...]
    left: Mapping[str, str]
    right: Mapping[str, str]
    coin: str
    heads: str
    tails: str
    skip: str
    wait: str
    checker: ProbAutomaton
    checker_initial: str
    checker_sink: str

    def center(self) -> tuple[str, str, str, str, str]:
        return (self.coin, self.heads, self.tails, self.skip, self.wait)


def build_simulation(a: ProbAutomaton) -> SimulationNPA:
    """Compile a simple automaton into the one-coin probe automaton.

    States: a left and a right copy of the biased-coin skeleton, five center
    states, and the fairness checker. Probe words move mass left-to-right
    through the single probabilistic coin toss at (coin, $); next_transition
    returns committed mass to the left copy; next_word settles accounts
    (accepting left mass enters the checker's accepting track, the rest dies,
    waiting mass restarts). Undrawn combinations stay put.
    """
    skel = _coin_skeleton(a)
    order = skel.states
    for q in order:
        if any(ch in q for ch in "(),"):
            raise ValidationError(f"state id {q!r} may not contain '(', ')' or ','")
    for b in skel.alphabet:
        if any(ch in b for ch in "(),"):
            raise ValidationError(f"letter {b!r} may not contain '(', ')' or ','")
    alphabet = sim_alphabet(skel.alphabet, order)
    checker = fairness_dfa(skel.alphabet, order)

    left = {q: f"L:{q}" for q in order}
    right = {q: f"R:{q}" for q in order}
    coin, heads, tails, skip, wait = "coin", "heads", "tails", "skip", "wait"
    states = (
        [left[q] for q in order]
        + [right[q] for q in order]
        + [coin, heads, tails, skip, wait]
        + list(checker.states)
    )

    support: set[tuple[str, str, str]] = set()

    def put(s: str, c: str, *targets: str) -> None:
        for t in targets:
            support.add((s, c, t))

    moved: dict[tuple[str, str], bool] = {}

    def one(s: str, c: str, t: str) -> None:
        put(s, c, t)
        moved[(s, c)] = True

    # Left copies.
    for q in order:
        for c in alphabet:
            kind = parse_sim_letter(c)
            if kind[0] == "check" and kind[2] == q:
                one(left[q], c, coin)
            elif kind[0] == "next_word":
                one(left[q], c, "D:start" if q in skel.final else "D:sink")
            else:
                put(left[q], c, left[q])
    # Right copies: only next_transition moves them back.
    for q in order:
        for c in alphabet:
            if c == NEXT_TRANSITION:
                one(right[q], c, left[q])
            else:
                put(right[q], c, right[q])
    # Center.
    for c in alphabet:
        kind = parse_sim_letter(c)
        if c == DOLLAR:
            put(coin, c, heads, tails, skip)
        else:
            put(coin, c, coin)
        if kind[0] == "apply":
            b, q = kind[1], kind[2]
            t_lam, t_other = skel.branch[(q, b)]
            one(heads, c, right[t_lam])
            one(tails, c, right[t_other])
            one(skip, c, wait)
        else:
            put(heads, c, heads)
            put(tails, c, tails)
            put(skip, c, skip)
        if c == NEXT_WORD:
            one(wait, c, left[skel.initial])
        else:
            put(wait, c, wait)
    # The checker runs itself on every letter.
    for d in checker.states:
        for c in alphabet:
            put(d, c, checker.delta[(d, c)].items()[0][0])

    npa = NumberlessAutomaton(
        tuple(states), alphabet, left[skel.initial], frozenset(support), frozenset({"D:start"})
    )
    return SimulationNPA(
        npa=npa,
        state_order=order,
        b_alphabet=skel.alphabet,
        left=left,
        right=right,
        coin=coin,
        heads=heads,
        tails=tails,
        skip=skip,
        wait=wait,
        checker=checker,
        checker_initial="D:start",
        checker_sink="D:sink",
    )


def instantiate_simulation(
    sim: SimulationNPA, lam: Fraction, theta: Fraction
) -> ProbAutomaton:
    """Give the one coin its numbers: heads lam*theta, tails (1-lam)*theta, skip 1-theta."""
    lam = Fraction(lam)
    theta = Fraction(theta)
    if not 0 < lam < 1:
        raise DomainError(f"lam must lie strictly between 0 and 1, got {lam}")
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie strictly between 0 and 1, got {theta}")
    npa = sim.npa
    by_pair: dict[tuple[str, str], list[str]] = {}
    for (s, c, t) in npa.support:
        by_pair.setdefault((s, c), []).append(t)
    delta: dict[tuple[str, str], Distribution] = {}
    dirac_cache: dict[str, Distribution] = {}
    for (s, c), targets in by_pair.items():
        if len(targets) == 1:
            t = targets[0]
            if t not in dirac_cache:
                dirac_cache[t] = dirac(t)
            delta[(s, c)] = dirac_cache[t]
        else:
            if (s, c) != (sim.coin, DOLLAR):
                raise ValidationError(f"unexpected probabilistic pair ({s!r}, {c!r})")
            delta[(s, c)] = Distribution(
                {sim.heads: lam * theta, sim.tails: (1 - lam) * theta, sim.skip: 1 - theta}
            )
    return instantiate(npa, delta)


def simulation_parameters(sim: SimulationNPA, pa: ProbAutomaton) -> tuple[Fraction, Fraction]:
    """Recover (lam, theta) from an instantiation of the simulation automaton."""
    if (sim.coin, DOLLAR) not in pa.delta:
        raise ValidationError(f"automaton lacks the coin pair ({sim.coin!r}, {DOLLAR!r})")
    d = pa.delta[(sim.coin, DOLLAR)]
    theta = d[sim.heads] + d[sim.tails]
    if theta == 0:
        raise DomainError("coin transition puts no mass on heads/tails")
    return d[sim.heads] / theta, theta


@dataclass(frozen=True)
class BuchiAutomaton:
    """A probabilistic automaton whose final states are read as a Buchi condition."""

    automaton: ProbAutomaton
    accepting: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        stray = self.accepting - self.automaton.state_set()
        if stray:
            raise ValidationError(f"accepting states {sorted(stray)} not among states")


def buchi_reduction(a: ProbAutomaton) -> BuchiAutomaton:
    """Add a restart letter: ``#`` jumps accepting states to the initial state.

    Non-accepting states fall into a rejecting sink on ``#``. The original
    final set becomes the Buchi-accepting set, so a run accepts iff restarts
    from accepting states happen forever.
    """
    if SHARP in a.alphabet:
        raise AlphabetClash(f"alphabet already contains {SHARP!r}")
    used = set(a.states)
    sink = _fresh("sink", used)
    states = a.states + (sink,)
    alphabet = a.alphabet + (SHARP,)
    delta: dict[tuple[str, str], Distribution] = dict(a.delta)
    back = dirac(a.initial)
    dead = dirac(sink)
    for q in a.states:
        delta[(q, SHARP)] = back if q in a.final else dead
    for c in alphabet:
        delta[(sink, c)] = dead
    pa = ProbAutomaton(states, alphabet, a.initial, delta, a.final)
    return BuchiAutomaton(pa, a.final)
