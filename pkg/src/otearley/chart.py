"""Agenda-driven Earley closure over an indexed CFG and a weighted
automaton.

Chart items are keyed by (rule, dot, left state, right state); weight and
history are not part of the key.  Each item records two histories:

* ``hist`` holds the last steps that achieve the item's current minimum
  weight (when a strictly cheaper path arrives, the old entries are removed
  and every item derived from this one is re-relaxed downward through the
  agenda);
* ``hist_full`` additionally keeps the last steps of every non-minimal
  path, which grammar recovery walks so that the exact best-path selection
  can happen once the per-origin tuples have been recombined.

Items live in columns indexed by their right-boundary state; an item's
address is the pair (column, position), assigned at creation and stable
under weight updates.
"""

from __future__ import annotations

from collections import deque
from typing import NamedTuple, Optional, Union

from .errors import OtearleyError
from .fsa import WeightedAutomaton
from .grammar import ComponentRef, IndexedCfg, IndexedRule

Addr = tuple  # (column, position)


class ScanStep(NamedTuple):
    """The item was produced by scanning one automaton edge from ``src``."""
    src: Addr

    def render(self) -> str:
        return f"s{self.src[0]}/{self.src[1]}"


class CompleteStep(NamedTuple):
    """The item was produced by completing ``completed`` into ``extended``."""
    completed: Addr
    extended: Addr

    def render(self) -> str:
        return (f"c{self.completed[0]}/{self.completed[1]};"
                f"{self.extended[0]}/{self.extended[1]}")


HistoryEntry = Union[ScanStep, CompleteStep]


class ChartItem:
    __slots__ = ("rule", "dot", "i", "j", "weight", "addr",
                 "hist", "hist_full", "_hset", "_fset")

    def __init__(self, rule: IndexedRule, dot: int, i: int, j: int,
                 weight: int, addr: Addr):
        self.rule = rule
        self.dot = dot
        self.i = i
        self.j = j
        self.weight = weight
        self.addr = addr
        self.hist: list = []
        self.hist_full: list = []
        self._hset: set = set()
        self._fset: set = set()

    @property
    def origin(self) -> int:
        return self.rule.origin

    @property
    def is_complete(self) -> bool:
        return self.dot == len(self.rule.rhs)

    @property
    def next_symbol(self):
        return self.rule.rhs[self.dot] if not self.is_complete else None

    def __repr__(self):
        return (f"ChartItem({self.addr[0]}/{self.addr[1]}: r{self.origin} "
                f"w={self.weight} {self.i}..{self.j})")


class Chart:
    """The closure produced by :func:`intersect`."""

    def __init__(self, grammar: IndexedCfg, automaton: WeightedAutomaton):
        self.grammar = grammar
        self.automaton = automaton
        self.columns: dict = {}
        self._by_key: dict = {}
        self._wait: dict = {}   # (state, ComponentRef) -> incomplete items
        self._done: dict = {}   # (state, ComponentRef) -> completed items

    def item(self, addr: Addr) -> ChartItem:
        return self.columns[addr[0]][addr[1]]

    def items(self):
        for j in sorted(self.columns):
            yield from self.columns[j]

    def __len__(self):
        return sum(len(col) for col in self.columns.values())

    def waiting_on(self, state: int, ref: ComponentRef):
        return self._wait.get((state, ref), [])

    def completed_from(self, state: int, ref: ComponentRef):
        return self._done.get((state, ref), [])

    def update(self, rule: IndexedRule, dot: int, i: int, j: int,
               weight: int, entry: Optional[HistoryEntry]):
        """Insert or reweight the item (rule, dot, i, j).

        Returns ``(item, schedule)``; ``schedule`` is true when the item is
        new or its weight just dropped, in which case its consequences must
        be (re)derived.  An equal-weight entry joins ``hist``; a
        higher-weight candidate is dropped; a lower-weight one replaces
        ``hist`` outright.  Every entry joins ``hist_full``.
        """
        key = (rule.ix, dot, i, j)
        item = self._by_key.get(key)
        if item is None:
            column = self.columns.setdefault(j, [])
            item = ChartItem(rule, dot, i, j, weight, addr=(j, len(column)))
            column.append(item)
            self._by_key[key] = item
            if entry is not None:
                item.hist.append(entry)
                item.hist_full.append(entry)
                item._hset.add(entry)
                item._fset.add(entry)
            if dot < len(rule.rhs):
                nxt = rule.rhs[dot]
                if isinstance(nxt, ComponentRef):
                    self._wait.setdefault((j, nxt), []).append(item)
            else:
                self._done.setdefault((i, rule.lhs), []).append(item)
            return item, True
        if entry is not None and entry not in item._fset:
            item._fset.add(entry)
            item.hist_full.append(entry)
        if weight > item.weight:
            return item, False
        if weight == item.weight:
            if entry is not None and entry not in item._hset:
                item._hset.add(entry)
                item.hist.append(entry)
            return item, False
        item.weight = weight
        item.hist = [entry] if entry is not None else []
        item._hset = set(item.hist)
        return item, True

    # -- rendering ----------------------------------------------------------

    def render_symbol(self, sym) -> str:
        if isinstance(sym, ComponentRef):
            if self.grammar.arity(sym.category) == 1:
                return sym.category
            return f"{sym.category}.{sym.index}"
        return str(sym)

    def render_production(self, item: ChartItem) -> str:
        parts = [self.render_symbol(s) for s in item.rule.rhs]
        parts.insert(item.dot, ".")
        return f"{self.render_symbol(item.rule.lhs)} -> {' '.join(parts)}"

    def render_history(self, item: ChartItem) -> str:
        return "{" + ", ".join(entry.render() for entry in item.hist) + "}"

    def dump(self) -> str:
        """Tabular view of the chart, one block per column: position, origin
        rule, weight, dotted production, and the minimal-path history set."""
        lines = []
        for j in sorted(self.columns):
            lines.append(f"column {j}")
            lines.append("#\tr\tw\tproduction\tH")
            for n, item in enumerate(self.columns[j]):
                lines.append(f"{n}\t{item.origin}\t{item.weight}\t"
                             f"{self.render_production(item)}\t"
                             f"{self.render_history(item)}")
        return "\n".join(lines) + "\n"


def intersect(grammar: IndexedCfg, automaton: WeightedAutomaton,
              agenda: str = "lifo") -> Chart:
    """Close the chart over the three inference steps.

    Seeds one item (s, S -> . alpha, s) per start production at the
    automaton's start state.  Popping an item derives its consequences:

    * next symbol is a nonterminal: predict its productions at the item's
      right state (a production starting with a terminal is only predicted
      when that state has an outgoing edge on it), and combine with already
      completed items for that nonterminal starting there;
    * next symbol is a terminal: scan every matching automaton edge, adding
      the edge weight;
    * item is complete: extend every item waiting on its nonterminal at its
      left state, adding the two item weights.

    ``agenda`` selects the processing order ("lifo" or "fifo").  The
    resulting items, weights and histories are order-independent; only the
    column positions (and therefore the addresses inside histories) depend
    on it.  The default depth-first order matches the column layout used by
    the golden tests.
    """
    if agenda not in ("lifo", "fifo"):
        raise OtearleyError(f"unknown agenda discipline {agenda!r}")
    chart = Chart(grammar, automaton)
    pending: deque = deque()

    def bump(result):
        item, schedule = result
        if schedule:
            pending.append(item)

    s = automaton.start
    for rule in grammar.by_lhs.get(grammar.start, []):
        bump(chart.update(rule, 0, s, s, rule.weight, None))

    while pending:
        item = pending.pop() if agenda == "lifo" else pending.popleft()
        if not item.is_complete:
            nxt = item.next_symbol
            if isinstance(nxt, ComponentRef):
                for prod in grammar.by_lhs.get(nxt, []):
                    first = prod.rhs[0]
                    if not isinstance(first, ComponentRef) \
                            and not automaton.has_edge_on(item.j, first):
                        continue
                    bump(chart.update(prod, 0, item.j, item.j,
                                      prod.weight, None))
                for done in list(chart.completed_from(item.j, nxt)):
                    bump(chart.update(
                        item.rule, item.dot + 1, item.i, done.j,
                        item.weight + done.weight,
                        CompleteStep(done.addr, item.addr)))
            else:
                for dst, ew in automaton.edges(item.j, nxt):
                    bump(chart.update(
                        item.rule, item.dot + 1, item.i, dst,
                        item.weight + ew, ScanStep(item.addr)))
        else:
            for waiter in list(chart.waiting_on(item.i, item.rule.lhs)):
                bump(chart.update(
                    waiter.rule, waiter.dot + 1, waiter.i, item.j,
                    waiter.weight + item.weight,
                    CompleteStep(item.addr, waiter.addr)))
    return chart


def accepting_items(chart: Chart, automaton: Optional[WeightedAutomaton] = None):
    """Addresses of every completed start-symbol item that spans the
    automaton start state to a final state, regardless of weight.  The
    item weights are per-component minima and may underestimate the joint
    tuple cost, so recovery starts from all of these and the final best-path
    selection happens after recombination."""
    a = automaton if automaton is not None else chart.automaton
    start = chart.grammar.start
    return sorted(item.addr for item in chart.items()
                  if item.is_complete and item.rule.lhs == start
                  and item.i == a.start and item.j in a.finals)


def success_items(chart: Chart, automaton: Optional[WeightedAutomaton] = None):
    """Addresses of the completed start-symbol items that span the automaton
    start state to a final state and carry the minimum weight among such
    items.  An empty list means the intersection is empty."""
    a = automaton if automaton is not None else chart.automaton
    addrs = accepting_items(chart, a)
    if not addrs:
        return []
    best = min(chart.item(addr).weight for addr in addrs)
    return [addr for addr in addrs if chart.item(addr).weight == best]
