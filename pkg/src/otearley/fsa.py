"""Weighted finite-state automata: candidate-set machines and constraint
machines.

An automaton is a set of integer states, a start state, a set of final
states, and labelled transitions with nonnegative integer weights.  There
are no epsilon transitions.  The weight of a string is the minimum total
edge weight over its accepting paths.

Text format, one transition per line ``src label weight dst``::

    %start 1
    %final 2
    1 0 0 1
    1 0 1 2
    1 1 0 1
    1 1 0 2

``%final`` lists zero or more states.  ``%alphabet`` optionally declares
labels beyond those that appear on transitions.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import AutomatonError, FormatError, ResourceLimitError

DEFAULT_ENUMERATION_LIMIT = 200_000


class Transition(NamedTuple):
    src: int
    label: str
    weight: int
    dst: int


class WeightedAutomaton:
    """Immutable automaton over string labels with dense integer states."""

    def __init__(self, start, finals, transitions, alphabet=None):
        trans = []
        for t in transitions:
            t = Transition(*t)
            if not isinstance(t.weight, int) or t.weight < 0:
                raise AutomatonError(
                    f"transition {t} has weight {t.weight!r}; weights are "
                    "nonnegative integers")
            if t.label == "":
                raise AutomatonError("epsilon-labelled transitions are not allowed")
            trans.append(t)
        self.transitions: tuple = tuple(trans)
        self.start: int = start
        self.finals: frozenset = frozenset(finals)
        states = {start} | self.finals
        labels = set()
        for t in self.transitions:
            states.add(t.src)
            states.add(t.dst)
            labels.add(t.label)
        self.states: frozenset = frozenset(states)
        if alphabet is not None:
            alphabet = frozenset(alphabet)
            if not labels <= alphabet:
                raise AutomatonError(
                    f"transition labels {sorted(labels - alphabet)} missing "
                    "from the declared alphabet")
            self.alphabet = alphabet
        else:
            self.alphabet = frozenset(labels)
        adjacency: dict = {}
        for t in self.transitions:
            adjacency.setdefault((t.src, t.label), []).append((t.dst, t.weight))
        for arcs in adjacency.values():
            arcs.sort()
        self._adjacency = adjacency
        out_labels: dict = {}
        for (src, label) in adjacency:
            out_labels.setdefault(src, set()).add(label)
        self._out_labels = out_labels

    def edges(self, state: int, label: str):
        """Outgoing (target, weight) pairs, sorted by (target, weight)."""
        return self._adjacency.get((state, label), [])

    def has_edge_on(self, state: int, label: str) -> bool:
        return label in self._out_labels.get(state, ())

    def string_weight(self, tokens):
        """Minimum accepting-path weight of one string, or None when it is
        not accepted."""
        costs = {self.start: 0}
        for tok in tokens:
            nxt: dict = {}
            for state, w in costs.items():
                for dst, ew in self.edges(state, tok):
                    if dst not in nxt or w + ew < nxt[dst]:
                        nxt[dst] = w + ew
            costs = nxt
            if not costs:
                return None
        best = [w for state, w in costs.items() if state in self.finals]
        return min(best) if best else None

    def __eq__(self, other):
        return (isinstance(other, WeightedAutomaton)
                and self.start == other.start
                and self.finals == other.finals
                and self.alphabet == other.alphabet
                and sorted(self.transitions) == sorted(other.transitions))

    def __hash__(self):
        return hash((self.start, self.finals, tuple(sorted(self.transitions))))

    def __repr__(self):
        return (f"WeightedAutomaton(states={len(self.states)}, "
                f"transitions={len(self.transitions)}, start={self.start}, "
                f"finals={sorted(self.finals)})")

    def __str__(self):
        return format_automaton(self)


def chain_automaton(symbols, first_state: int = 0) -> WeightedAutomaton:
    """A straight-line automaton accepting exactly one string, all edge
    weights zero."""
    symbols = list(symbols)
    transitions = [
        Transition(first_state + i, sym, 0, first_state + i + 1)
        for i, sym in enumerate(symbols)
    ]
    return WeightedAutomaton(first_state, [first_state + len(symbols)],
                             transitions)


def validate_constraint(a: WeightedAutomaton, alphabet=None) -> list:
    """Check the requirements on a constraint machine: deterministic,
    complete over the alphabet, and accepting in every state (so every
    string is accepted and the weights are its violation count).  Returns a
    list of problem descriptions; empty means valid."""
    sigma = frozenset(alphabet) if alphabet is not None else a.alphabet
    problems = []
    for state in sorted(a.states):
        for label in sorted(sigma):
            arcs = a.edges(state, label)
            if not arcs:
                problems.append(f"missing transition ({state}, {label!r})")
            elif len(arcs) > 1:
                problems.append(
                    f"nondeterministic: {len(arcs)} transitions on "
                    f"({state}, {label!r})")
        if state not in a.finals:
            problems.append(f"state {state} is not final")
    extra = a.alphabet - sigma
    if extra:
        problems.append(f"labels outside the alphabet: {sorted(extra)}")
    return problems


def enumerate_accepted(a: WeightedAutomaton, max_len: int,
                       limit: int = DEFAULT_ENUMERATION_LIMIT) -> dict:
    """All accepted strings of length <= max_len mapped to their minimum
    accepting-path weight.  Strings are tuples of labels."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    # frontier: string -> {state: min weight to reach it spelling the string}
    frontier = {(): {a.start: 0}}
    accepted: dict = {}
    size = 0
    for length in range(max_len + 1):
        for tokens, costs in frontier.items():
            best = [w for state, w in costs.items() if state in a.finals]
            if best:
                accepted[tokens] = min(best)
        if length == max_len:
            break
        nxt: dict = {}
        for tokens, costs in frontier.items():
            for state, w in costs.items():
                for label in sorted(a._out_labels.get(state, ())):
                    for dst, ew in a.edges(state, label):
                        key = tokens + (label,)
                        bucket = nxt.setdefault(key, {})
                        if dst not in bucket:
                            size += 1
                            if size > limit:
                                raise ResourceLimitError(
                                    f"enumeration exceeded {limit} "
                                    "(string, state) pairs")
                        if dst not in bucket or w + ew < bucket[dst]:
                            bucket[dst] = w + ew
        frontier = nxt
    return accepted


# ---------------------------------------------------------------------------
# Text format

def parse_automaton(text: str) -> WeightedAutomaton:
    """Parse the automaton text format; see the module docstring."""
    start = None
    finals = None
    alphabet = None
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "%start":
            if len(parts) != 2 or not _is_int(parts[1]):
                raise FormatError(f"line {lineno}: %start takes one state id")
            start = int(parts[1])
        elif parts[0] == "%final":
            if not all(_is_int(p) for p in parts[1:]):
                raise FormatError(f"line {lineno}: %final takes state ids")
            finals = [int(p) for p in parts[1:]]
        elif parts[0] == "%alphabet":
            alphabet = parts[1:]
        elif parts[0].startswith("%"):
            raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        else:
            if len(parts) != 4 or not (_is_int(parts[0]) and _is_int(parts[2])
                                       and _is_int(parts[3])):
                raise FormatError(
                    f"line {lineno}: expected 'src label weight dst'")
            transitions.append(Transition(int(parts[0]), parts[1],
                                          int(parts[2]), int(parts[3])))
    if start is None:
        raise FormatError("missing %start directive")
    if finals is None:
        raise FormatError("missing %final directive")
    if alphabet is not None:
        extra = set(alphabet) | {t.label for t in transitions}
        alphabet = extra
    try:
        return WeightedAutomaton(start, finals, transitions, alphabet=alphabet)
    except AutomatonError as exc:
        raise FormatError(str(exc)) from exc


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def format_automaton(a: WeightedAutomaton) -> str:
    """Serialize an automaton to its canonical text form (stable bytes)."""
    for t in a.transitions:
        if any(ch.isspace() for ch in t.label) or "#" in t.label \
                or t.label.startswith("%") or not t.label:
            raise FormatError(
                f"label {t.label!r} cannot be written in the text format")
    final_line = "%final"
    if a.finals:
        final_line += " " + " ".join(str(s) for s in sorted(a.finals))
    lines = [f"%start {a.start}", final_line]
    inferred = {t.label for t in a.transitions}
    if a.alphabet - inferred:
        lines[1:1] = ["%alphabet " + " ".join(sorted(a.alphabet))]
    for t in sorted(a.transitions, key=lambda t: (t.src, t.label, t.weight, t.dst)):
        lines.append(f"{t.src} {t.label} {t.weight} {t.dst}")
    return "\n".join(lines) + "\n"
