"""Gestural-score tier tables, the reduplication candidate grammar, and the
ranked-constraint evaluation loop.

A tier table is a stack of named tiers over the symbol alphabet
``- + [ ] |``; a time slice is one column across all tiers.  Tables flatten
to strings column by column, one symbol per tier per slice, which is the
alphabet the grammars and automata in this package work over.

Text format, one row per tier::

    C: [ + ] -
    V: - - - -

Full reduplication tables use a fixed tier order derived from the surface
tier names: the surface tiers, their underlying counterparts (``_u``
suffix), their reduplicant-reference counterparts (``_r`` suffix), and the
bookkeeping tiers INS, DEL, RDEL, RED and BASE, in that order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .chart import accepting_items, intersect
from .errors import EmptyCandidateSetError, GrammarError, TierTableError
from .fsa import WeightedAutomaton, chain_automaton, validate_constraint
from .grammar import ComponentRef, Mcfg, decompose
from .recovery import recombine, recover, strip_decoration

TIER_ALPHABET = ("-", "+", "[", "]", "|")
SPECIAL_TIERS = ("INS", "DEL", "RDEL", "RED", "BASE")

# Halves of a symbol at a boundary slice: the copy of a right-facing
# boundary keeps opening edges (a pipe opens), the copy of a left-facing
# boundary keeps closing edges.
RIGHT_HALF = {"-": "-", "+": "+", "[": "[", "]": "-", "|": "["}
LEFT_HALF = {"-": "-", "+": "+", "[": "-", "]": "]", "|": "]"}


# ---------------------------------------------------------------------------
# Tier tables

class TierTable:
    """An ordered stack of named tiers; ``slices`` holds one column per time
    slice, one symbol per tier."""

    def __init__(self, tier_names, slices):
        names = tuple(tier_names)
        if not names:
            raise TierTableError("a tier table needs at least one tier")
        if len(set(names)) != len(names):
            raise TierTableError(f"duplicate tier names in {names}")
        for name in names:
            if not name or any(ch.isspace() for ch in name) or ":" in name:
                raise TierTableError(f"bad tier name {name!r}")
        cols = tuple(tuple(col) for col in slices)
        for ix, col in enumerate(cols):
            if len(col) != len(names):
                raise TierTableError(
                    f"slice {ix} has {len(col)} cells for {len(names)} tiers")
            for sym in col:
                if sym not in TIER_ALPHABET:
                    raise TierTableError(
                        f"slice {ix}: symbol {sym!r} outside the alphabet")
        self.tier_names = names
        self.slices = cols

    def row(self, name: str) -> tuple:
        ix = self.tier_names.index(name)
        return tuple(col[ix] for col in self.slices)

    def flatten(self) -> tuple:
        """Column-major flattening: every slice in order, each listing its
        tiers top to bottom."""
        return tuple(sym for col in self.slices for sym in col)

    def __eq__(self, other):
        return (isinstance(other, TierTable)
                and self.tier_names == other.tier_names
                and self.slices == other.slices)

    def __repr__(self):
        return (f"TierTable(tiers={len(self.tier_names)}, "
                f"slices={len(self.slices)})")

    def __str__(self):
        return format_tier_table(self)


def encode_table(table: TierTable) -> str:
    """Flatten a table to the string the grammars and automata read."""
    return "".join(table.flatten())


def decode_table(symbols, tiers) -> TierTable:
    """Rebuild a table from a flat string; inverse of :func:`encode_table`.
    ``tiers`` is a tier-name sequence or a TierInventory."""
    names = tiers.tier_names if isinstance(tiers, TierInventory) else tuple(tiers)
    symbols = tuple(symbols)
    n = len(names)
    if n == 0:
        raise TierTableError("a tier table needs at least one tier")
    if len(symbols) % n:
        raise TierTableError(
            f"cannot split {len(symbols)} symbols into slices of {n} tiers")
    cols = [symbols[k:k + n] for k in range(0, len(symbols), n)]
    return TierTable(names, cols)


def parse_tier_table(text: str) -> TierTable:
    """Parse the row-per-tier text format; see the module docstring."""
    names = []
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rest = line.partition(":")
        if not sep:
            raise TierTableError(f"line {lineno}: expected 'NAME: sym ...'")
        names.append(name.strip())
        rows.append(tuple(rest.split()))
    if not names:
        raise TierTableError("no tier rows found")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise TierTableError(f"tiers have differing slice counts {sorted(width)}")
    cols = list(zip(*rows)) if rows[0] else []
    return TierTable(names, cols)


def format_tier_table(table: TierTable) -> str:
    pad = max(len(name) for name in table.tier_names) + 1
    lines = []
    for ix, name in enumerate(table.tier_names):
        cells = " ".join(col[ix] for col in table.slices)
        lines.append(f"{name + ':':<{pad}} {cells}".rstrip())
    return "\n".join(lines) + "\n"


def from_tier_table(table: TierTable) -> WeightedAutomaton:
    """A straight-line, weight-zero automaton accepting exactly the table's
    flattening (one edge per tier per time slice)."""
    return chain_automaton(table.flatten())


class TierInventory:
    """The fixed tier layout of reduplication tables: T surface tiers, their
    ``_u`` (underlying) and ``_r`` (reduplicant-reference) counterparts, and
    the five bookkeeping tiers, 3T + 5 in all."""

    def __init__(self, surface):
        surface = tuple(surface)
        if not surface:
            raise TierTableError("at least one surface tier is required")
        derived = [n + "_u" for n in surface] + [n + "_r" for n in surface]
        names = tuple(surface) + tuple(derived) + SPECIAL_TIERS
        if len(set(names)) != len(names):
            raise TierTableError(
                f"surface tier names {surface} collide with derived or "
                "special tier names")
        for name in surface:
            if not name or any(ch.isspace() for ch in name) or ":" in name:
                raise TierTableError(f"bad tier name {name!r}")
        self.surface = surface
        self.tier_names = names

    @property
    def size(self) -> int:
        return len(self.tier_names)

    def table(self, slices) -> TierTable:
        return TierTable(self.tier_names, slices)

    @classmethod
    def from_tier_names(cls, names) -> "TierInventory":
        names = tuple(names)
        if len(names) < 8 or (len(names) - 5) % 3 or names[-5:] != SPECIAL_TIERS:
            raise TierTableError(
                f"{len(names)} tiers do not form a reduplication layout "
                "(3T surface/underlying/reference tiers plus INS DEL RDEL "
                "RED BASE)")
        t = (len(names) - 5) // 3
        inv = cls(names[:t])
        if inv.tier_names != names:
            raise TierTableError(
                f"tier order {names} does not match the derived layout "
                f"{inv.tier_names}")
        return inv

    def __eq__(self, other):
        return isinstance(other, TierInventory) and self.surface == other.surface

    def __repr__(self):
        return f"TierInventory(surface={list(self.surface)})"


# ---------------------------------------------------------------------------
# Reduplicative identity

def _span(row, tier: str):
    marked = [ix for ix, sym in enumerate(row) if sym != "-"]
    if not marked:
        return None, []
    lo, hi = marked[0], marked[-1]
    problems = []
    if marked != list(range(lo, hi + 1)):
        problems.append(f"tier {tier}: marked slices {marked} are not contiguous")
    return (lo, hi), problems


def redup_identity_check(table: TierTable) -> list:
    """Check that, slice for slice and skipping RDEL-marked time, the
    reduplicant-reference material inside the BASE span copies the surface
    material inside the RED span (with boundary symbols halved at the two
    ends of the span).  Returns mismatch descriptions; empty means the copy
    is exact."""
    inv = TierInventory.from_tier_names(table.tier_names)
    t = len(inv.surface)
    red_span, problems = _span(table.row("RED"), "RED")
    base_span, more = _span(table.row("BASE"), "BASE")
    problems += more
    if problems:
        return problems
    if red_span is None and base_span is None:
        return []
    if red_span is None or base_span is None:
        missing = "RED" if red_span is None else "BASE"
        return [f"tier {missing}: no span marked while its partner has one"]
    red = list(range(red_span[0], red_span[1] + 1))
    base = list(range(base_span[0], base_span[1] + 1))
    if len(red) != len(base):
        return [f"RED span has {len(red)} slices but BASE span has "
                f"{len(base)} slices"]
    rdel = table.row("RDEL")
    out = []
    last = len(red) - 1
    for k in range(len(red)):
        if rdel[base[k]] != "-":
            continue
        for tix in range(t):
            surf = table.tier_names[tix]
            ref = table.tier_names[2 * t + tix]
            expected = table.slices[red[k]][tix]
            if k == 0:
                expected = RIGHT_HALF[expected]
            if k == last:
                expected = LEFT_HALF[expected]
            found = table.slices[base[k]][2 * t + tix]
            if found != expected:
                out.append(
                    f"tier {ref}, slice {base[k]}: expected {expected!r} "
                    f"(copy of {surf} at slice {red[k]}), found {found!r}")
    return out


# ---------------------------------------------------------------------------
# The reduplication candidate grammar

REDUP_DIRECTIONS = ("red-first", "base-first")

_BDR_PAIRS = [("-", "-"), ("+", "+"), ("[", "["), ("]", "-"), ("|", "[")]
_BDL_PAIRS = [("-", "-"), ("+", "+"), ("[", "-"), ("]", "]"), ("|", "]")]
_B_PAIRS = [(s, s) for s in TIER_ALPHABET]


def gen_redup_grammar(tiers, direction: str = "red-first") -> Mcfg:
    """The candidate grammar whose language is exactly the flattened
    reduplication tables in which the reference tiers inside the base copy
    the surface tiers of the reduplicant.

    ``tiers`` gives the surface tier names (or a TierInventory); the grammar
    itself depends only on their number T.  Every generated string is a
    whole number of (3T + 5)-symbol time slices.  ``direction`` selects
    whether the reduplicant precedes the base or follows it.

    Categories: a slice is SSR (surface tiers), UR (underlying), MRD or one
    half of a copy pair (reference tiers), then one five-symbol flag
    category (NBR/RLE/RRE/BLE/BRE/RB/BR/RED/BAS) covering INS, DEL, RDEL,
    RED and BASE.  The copy pairs B / BDR / BDL yield (surface material,
    its reference copy) per slice, built from one two-part category per
    tier; BDR and BDL keep only the right- or left-facing half of boundary
    symbols.  Rd1 splits the reduplicated region into three parts: the
    reduplicant's opening slices, the shared boundary slice plus the base
    interior, and the closing base slice (the region's last slice).  The
    wrapper rule Rd concatenates all three parts in order, so every part is
    referenced exactly once and the normal form holds; Rd2 grows the
    reduplicant interior and the base interior in lockstep, one copy pair
    per step.
    """
    if isinstance(tiers, TierInventory):
        inventory = tiers
    else:
        inventory = TierInventory(tiers)
    t = len(inventory.surface)
    if direction not in REDUP_DIRECTIONS:
        raise GrammarError(
            f"direction must be one of {REDUP_DIRECTIONS}, got {direction!r}")

    def r(name, k=0):
        return ComponentRef(name, k)

    a_row = tuple(r("A") for _ in range(t))
    dash_row = ("-",) * t
    flags = {
        "NBR": (r("A"), r("A"), "-", "-", "-"),
        "RLE": (r("A"), r("A"), "-", "[", "-"),
        "RRE": (r("A"), r("A"), "-", "]", "-"),
        "BLE": (r("A"), r("A"), r("A"), "-", "["),
        "BRE": (r("A"), r("A"), r("A"), "-", "]"),
        "RB": (r("A"), r("A"), r("A"), "]", "["),
        "BR": (r("A"), r("A"), r("A"), "[", "]"),
        "RED": (r("A"), r("A"), "-", "+", "-"),
        "BAS": (r("A"), r("A"), r("A"), "-", "+"),
    }

    rules = [
        ("S", ((r("Non"), r("Rd"), r("Non")),)),
        ("S", ((r("Rd"), r("Non")),)),
        ("S", ((r("Non"), r("Rd")),)),
        ("S", ((r("Rd"),),)),
        ("Non", ((r("SSR"), r("UR"), r("MRD"), r("NBR")),)),
        ("Non", ((r("Non"), r("SSR"), r("UR"), r("MRD"), r("NBR")),)),
        ("SSR", (a_row,)),
        ("UR", (a_row,)),
        ("MRD", (dash_row,)),
        ("Rd", ((r("Rd1", 0), r("Rd1", 1), r("Rd1", 2)),)),
    ]
    for pair_cat in ("BDR", "BDL", "B"):
        rules.append((pair_cat, (
            tuple(r(f"{pair_cat}{n}", 0) for n in range(t)),
            tuple(r(f"{pair_cat}{n}", 1) for n in range(t)),
        )))
    for sym in TIER_ALPHABET:
        rules.append(("A", ((sym,),)))
    for pair_cat, pairs in (("BDR", _BDR_PAIRS), ("BDL", _BDL_PAIRS),
                            ("B", _B_PAIRS)):
        for n in range(t):
            for full, half in pairs:
                rules.append((f"{pair_cat}{n}", ((full,), (half,))))
    for name, rhs in flags.items():
        rules.append((name, (rhs,)))

    if direction == "red-first":
        rules.append(("Rd1", (
            (r("BDR", 0), r("UR"), r("MRD"), r("RLE"), r("Rd2", 0)),
            (r("BDL", 0), r("UR"), r("BDR", 1), r("RB"), r("Rd2", 1)),
            (r("SSR"), r("UR"), r("BDL", 1), r("BRE")),
        )))
        rules.append(("Rd2", (
            (r("B", 0), r("UR"), r("MRD"), r("RED")),
            (r("SSR"), r("UR"), r("B", 1), r("BAS")),
        )))
        rules.append(("Rd2", (
            (r("Rd2", 0), r("B", 0), r("UR"), r("MRD"), r("RED")),
            (r("Rd2", 1), r("SSR"), r("UR"), r("B", 1), r("BAS")),
        )))
    else:
        rules.append(("Rd1", (
            (r("SSR"), r("UR"), r("BDR", 1), r("BLE"), r("Rd2", 0)),
            (r("BDR", 0), r("UR"), r("BDL", 1), r("BR"), r("Rd2", 1)),
            (r("BDL", 0), r("UR"), r("MRD"), r("RRE")),
        )))
        rules.append(("Rd2", (
            (r("SSR"), r("UR"), r("B", 1), r("BAS")),
            (r("B", 0), r("UR"), r("MRD"), r("RED")),
        )))
        rules.append(("Rd2", (
            (r("Rd2", 0), r("SSR"), r("UR"), r("B", 1), r("BAS")),
            (r("Rd2", 1), r("B", 0), r("UR"), r("MRD"), r("RED")),
        )))
    return Mcfg("S", rules)


# ---------------------------------------------------------------------------
# The evaluation pipeline

class ConstraintRanking:
    """An ordered constraint hierarchy, highest rank first."""

    def __init__(self, constraints):
        self.constraints = tuple(constraints)

    def problems(self, alphabet=None) -> list:
        """(rank, problem) pairs from checking every constraint against the
        shared alphabet (default: the union of the constraints' alphabets)."""
        if alphabet is None:
            alphabet = frozenset().union(
                *(c.alphabet for c in self.constraints)) \
                if self.constraints else frozenset()
        out = []
        for rank, constraint in enumerate(self.constraints):
            for problem in validate_constraint(constraint, alphabet):
                out.append((rank, problem))
        return out

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)


def optimal_intersection(g: Mcfg, a: WeightedAutomaton,
                         keep_decorations: bool = False) -> Mcfg:
    """Intersect a candidate grammar with a weighted automaton and keep only
    the minimum-weight derivations, returning a weight-zero grammar for
    exactly the argmin string set (the explicit empty grammar when the
    intersection is empty).

    This chains the full pipeline: component split, chart closure, recovery
    from every accepting item, per-origin recombination with exact best-path
    selection, then decoration stripping (skipped when ``keep_decorations``
    is set); the trim happens inside recombination.
    """
    if g.is_empty:
        return _empty_like(g)
    icfg = decompose(g)
    chart = intersect(icfg, a)
    accepted = accepting_items(chart)
    if not accepted:
        return _empty_like(g)
    spans = []
    for addr in accepted:
        item = chart.item(addr)
        if (item.i, item.j) not in spans:
            spans.append((item.i, item.j))
    prods = recover(chart, accepted)
    recovered = recombine(prods, g, a, start_spans=spans)
    if keep_decorations:
        return recovered.grammar
    return strip_decoration(recovered)


def _empty_like(g: Mcfg) -> Mcfg:
    return Mcfg(g.start, [], categories={g.start: 1})


def evaluate(candidates: Mcfg, ranking) -> Mcfg:
    """Winnow a candidate grammar through a constraint hierarchy: intersect
    with each constraint in rank order, keep only the minimum-violation
    survivors, zero the weights, and feed the result to the next rank.

    An empty candidate grammar passes through unchanged (empty in, empty
    out).  A non-empty grammar can only be emptied by a constraint that
    rejects strings outright, which no total constraint machine does; that
    situation raises EmptyCandidateSetError rather than returning empty.
    """
    g = candidates
    if g.is_empty:
        return g
    for rank, constraint in enumerate(ranking):
        g = optimal_intersection(g, constraint)
        if g.is_empty:
            raise EmptyCandidateSetError(
                f"constraint at rank {rank} eliminated every candidate; "
                "is it total over the candidate alphabet?")
    return g


def intersect_input(candidates: Mcfg, machine: WeightedAutomaton) -> Mcfg:
    """Restrict a candidate grammar to the strings an input machine accepts.
    Input machines are expected to be unweighted; nonzero weights are
    allowed but reported, since they would take part in the optimization.
    An empty result is a normal value here."""
    if any(t.weight for t in machine.transitions):
        warnings.warn(
            "input automaton carries nonzero weights; they will be treated "
            "as constraint violations", stacklevel=2)
    if candidates.is_empty:
        return candidates
    return optimal_intersection(candidates, machine)
