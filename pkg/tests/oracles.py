"""Independent test oracles.

Everything here recomputes expected values from first principles using plain
dict/list arithmetic on Fractions, deliberately avoiding the library's own
Distribution/step/matrix machinery so the two sides of every comparison share
no code.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


# --- word evaluation by raw propagation ---------------------------------------


def raw_after(pa, word):
    """State-mass dict after reading word, via plain dict arithmetic."""
    mass = {pa.initial: ONE}
    for letter in word:
        nxt: dict[str, Fraction] = {}
        for state, p in mass.items():
            for target, q in pa.delta[(state, letter)].items():
                nxt[target] = nxt.get(target, ZERO) + p * q
        mass = nxt
    return mass


def raw_accept(pa, word):
    return sum((p for s, p in raw_after(pa, word).items() if s in pa.final), ZERO)


def raw_reach(pa, source, word, targets):
    mass = {source: ONE}
    for letter in word:
        nxt: dict[str, Fraction] = {}
        for state, p in mass.items():
            for target, q in pa.delta[(state, letter)].items():
                nxt[target] = nxt.get(target, ZERO) + p * q
        mass = nxt
    return sum((p for s, p in mass.items() if s in targets), ZERO)


def path_accept(pa, word):
    """Acceptance by full path enumeration (exponential; short words only)."""
    paths = {(pa.initial,): ONE}
    for letter in word:
        nxt: dict[tuple, Fraction] = {}
        for path, p in paths.items():
            for target, q in pa.delta[(path[-1], letter)].items():
                key = path + (target,)
                nxt[key] = nxt.get(key, ZERO) + p * q
        paths = nxt
    return sum((p for path, p in paths.items() if path[-1] in pa.final), ZERO)


# --- seesaw closed form --------------------------------------------------------


def seesaw_closed_form(x, y, n, m):
    """Acceptance of (i a^n f)^m: (x^n/(x^n+y^n)) * (1-(1-(x^n+y^n)/2)^m)."""
    xn, yn = x**n, y**n
    return (xn / (xn + yn)) * (ONE - (ONE - (xn + yn) / 2) ** m)


# --- lasso words: absorbing-chain linear-system oracle -------------------------


def _solve(rows, rhs):
    """Gaussian elimination with partial pivoting on Fractions."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        inv = ONE / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def lasso_oracle(pa, accepting, stem, cycle):
    """P(accepting states recur forever) on stem . cycle^omega.

    Boundary-chain method: M[q][r] = P(q -cycle-> r), A[q][r] = the part of
    that mass whose traversal visits an accepting state after some letter.
    Recurrent classes come from a boolean reachability closure; a class is
    good when some member has a positive accepting-traversal row. The hit
    probability solves a fresh linear system.
    """
    states = list(pa.states)
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)

    def cycle_rows(start):
        # mass[(state, seen-accepting-this-cycle)]
        mass = {(start, False): ONE}
        for letter in cycle:
            nxt: dict[tuple[str, bool], Fraction] = {}
            for (state, seen), p in mass.items():
                for target, q in pa.delta[(state, letter)].items():
                    key = (target, seen or target in accepting)
                    nxt[key] = nxt.get(key, ZERO) + p * q
            mass = nxt
        m_row = [ZERO] * n
        a_row = [ZERO] * n
        for (state, seen), p in mass.items():
            m_row[idx[state]] += p
            if seen:
                a_row[idx[state]] += p
        return m_row, a_row

    m_rows, a_rows = zip(*(cycle_rows(s) for s in states))

    reach = [[m_rows[i][j] != 0 or i == j for j in range(n)] for i in range(n)]
    for _ in range(n.bit_length()):
        reach = [
            [any(reach[i][k] and reach[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
    recurrent = [
        all(reach[j][i] for j in range(n) if reach[i][j]) for i in range(n)
    ]
    good = [False] * n
    for i in range(n):
        if recurrent[i]:
            comp = [j for j in range(n) if reach[i][j] and reach[j][i]]
            good[i] = any(any(v != 0 for v in a_rows[j]) for j in comp)

    # h_i = P(eventually absorbed into a good class from i)
    rows = []
    rhs = []
    for i in range(n):
        if recurrent[i]:
            row = [ZERO] * n
            row[i] = ONE
            rows.append(row)
            rhs.append(ONE if good[i] else ZERO)
        else:
            row = [-m_rows[i][j] for j in range(n)]
            row[i] += ONE
            rows.append(row)
            rhs.append(ZERO)
    # transient rows need the recurrent h folded into the rhs; substitute
    for i in range(n):
        if not recurrent[i]:
            for j in range(n):
                if recurrent[j] and rows[i][j] != 0:
                    rhs[i] -= rows[i][j] * (ONE if good[j] else ZERO)
                    rows[i][j] = ZERO
    h = _solve(rows, rhs)

    mass = {pa.initial: ONE}
    for letter in stem:
        nxt: dict[str, Fraction] = {}
        for state, p in mass.items():
            for target, q in pa.delta[(state, letter)].items():
                nxt[target] = nxt.get(target, ZERO) + p * q
        mass = nxt
    return sum((p * h[idx[s]] for s, p in mass.items()), ZERO)


# --- probe-word block-structure pattern oracle ---------------------------------


def _parse_probe(token):
    if token in ("$", "next_transition", "next_word", "#"):
        return (token,)
    for kind in ("check", "apply"):
        prefix = kind + "("
        if token.startswith(prefix) and token.endswith(")"):
            base, sep, state = token[len(prefix) : -1].partition(",")
            if sep:
                return (kind, base, state)
    return ("other", token)


def probe_word_valid(word, state_order, base_alphabet):
    """Membership in {hat(u) . next_word : u over base_alphabet}* by shape.

    A valid word splits on next_word into blocks (the final piece empty);
    each block is a sequence of letter segments, each segment being
    check(b,q) $ apply(b,q) swept over state_order plus one trailing
    next_transition, with a single consistent base letter b.
    """
    n = len(state_order)
    pieces = []
    current = []
    for token in word:
        if token == "next_word":
            pieces.append(current)
            current = []
        else:
            current.append(token)
    if current:
        return False  # must end with next_word (or be empty)
    seg = 3 * n + 1
    for block in pieces:
        if len(block) % seg != 0:
            return False
        for off in range(0, len(block), seg):
            chunk = block[off : off + seg]
            first = _parse_probe(chunk[0])
            if first[0] != "check":
                return False
            base = first[1]
            if base not in base_alphabet:
                return False
            for i, state in enumerate(state_order):
                if _parse_probe(chunk[3 * i]) != ("check", base, state):
                    return False
                if chunk[3 * i + 1] != "$":
                    return False
                if _parse_probe(chunk[3 * i + 2]) != ("apply", base, state):
                    return False
            if chunk[seg - 1] != "next_transition":
                return False
    return True
