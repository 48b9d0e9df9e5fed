"""Reconstruction of the intersection grammar from a closed chart.

``recover`` walks completed items right-to-left through their recorded
histories and emits state-decorated productions, one CFG component at a
time.  ``recombine`` pairs components that share an origin rule back into
tuple rules, computes each rule instance's exact weight from the automaton,
and keeps only the rules that take part in some minimum-weight derivation
("remove non-optimal paths"), zeroing the weights of the survivors.
``strip_decoration`` renames the state-decorated categories to fresh plain
names.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .chart import Chart, ScanStep, success_items
from .errors import OtearleyError, RecoveryLimitError
from .fsa import WeightedAutomaton
from .grammar import ComponentRef, Mcfg, trim

DEFAULT_MAX_ALTERNATIVES = 10_000

INF = float("inf")


@dataclass(frozen=True)
class AnnotatedRef:
    """A nonterminal occurrence decorated with the automaton states its
    yield spans."""
    category: str
    index: int
    span: tuple  # (left state, right state)

    def __str__(self) -> str:
        return f"{self.category}.{self.index}({self.span[0]},{self.span[1]})"


@dataclass(frozen=True)
class AnnotatedProduction:
    origin: int
    lhs: AnnotatedRef
    rhs: tuple  # of str | AnnotatedRef

    def __str__(self) -> str:
        body = " ".join(str(x) for x in self.rhs)
        return f"(r{self.origin}) {self.lhs} -> {body}"


def recover(chart: Chart, success=None,
            max_alternatives: int = DEFAULT_MAX_ALTERNATIVES):
    """Emit the state-decorated productions reachable from the given
    completed items (default: the chart's success items).

    Each queued address is processed at most once.  Walking an item
    right-to-left, a scan entry prepends the scanned terminal and a
    completion entry prepends the completed nonterminal decorated with its
    span (queueing that item); histories with several entries multiply out
    into several right-hand sides.  Identical productions are emitted once,
    in first-derivation order.
    """
    if success is None:
        success = success_items(chart)
    queue: deque = deque(success)
    processed: set = set()
    out: list = []
    seen: set = set()
    while queue:
        addr = queue.popleft()
        if addr in processed:
            continue
        processed.add(addr)
        item = chart.item(addr)
        if not item.is_complete:
            raise OtearleyError(f"recovery reached incomplete item {item!r}")
        lhs = AnnotatedRef(item.rule.lhs.category, item.rule.lhs.index,
                           (item.i, item.j))
        for rhs in _alternatives(chart, item, queue, max_alternatives):
            prod = AnnotatedProduction(item.origin, lhs, tuple(rhs))
            if prod not in seen:
                seen.add(prod)
                out.append(prod)
    return out


def _alternatives(chart: Chart, item, queue, cap):
    """All right-hand sides reconstructable for one completed item."""

    def walk(rhss, item, pos):
        if pos == 0:
            return rhss
        results = []
        for entry in item.hist_full:
            if isinstance(entry, ScanStep):
                sym = item.rule.rhs[pos - 1]
                extended = [[sym] + rhs for rhs in rhss]
                prev = chart.item(entry.src)
            else:
                completed = chart.item(entry.completed)
                ref = AnnotatedRef(completed.rule.lhs.category,
                                   completed.rule.lhs.index,
                                   (completed.i, completed.j))
                extended = [[ref] + rhs for rhs in rhss]
                queue.append(entry.completed)
                prev = chart.item(entry.extended)
            results.extend(walk(extended, prev, pos - 1))
            if len(results) > cap:
                raise RecoveryLimitError(
                    f"item {item.addr} multiplied out more than {cap} "
                    "right-hand sides")
        return results

    return walk([[]], item, item.dot)


# ---------------------------------------------------------------------------
# Recombination

@dataclass
class RecoveredMcfg:
    """A grammar over state-decorated categories, plus the map from each
    decorated name back to (base category, span tuple)."""
    grammar: Mcfg
    decorations: dict

    @property
    def is_empty(self) -> bool:
        return self.grammar.is_empty


def _decorate(name: str, spans) -> str:
    return name + "".join(f"({i},{j})" for i, j in spans)


def _run_cost(a: WeightedAutomaton, src: int, tokens, dst: int):
    """Minimum weight of an automaton path from src to dst spelling the
    given terminal run (None when there is no such path)."""
    costs = {src: 0}
    for tok in tokens:
        nxt: dict = {}
        for state, w in costs.items():
            for to, ew in a.edges(state, tok):
                if to not in nxt or w + ew < nxt[to]:
                    nxt[to] = w + ew
        costs = nxt
        if not costs:
            return None
    return costs.get(dst)


def _component_cost(a: WeightedAutomaton, span, rhs) -> int:
    """Exact minimum edge weight spent on the terminals of one recovered
    component, chaining the decorated spans left to right."""
    cost = 0
    pos = span[0]
    run: list = []
    for elem in rhs:
        if isinstance(elem, AnnotatedRef):
            step = _run_cost(a, pos, run, elem.span[0])
            if step is None:
                raise OtearleyError(
                    f"recovered component does not chain at {elem}")
            cost += step
            run = []
            pos = elem.span[1]
        else:
            run.append(elem)
    step = _run_cost(a, pos, run, span[1])
    if step is None:
        raise OtearleyError("recovered component does not chain at its end")
    return cost + step


def _dep_counts(rhs_components, arities) -> dict:
    """How many independent sub-derivations each referenced category
    contributes: one per mention for arity-1 categories, one in total for a
    tuple category (its components all come from a single derivation)."""
    counts: dict = {}
    seen_multi: set = set()
    for seq in rhs_components:
        for item in seq:
            if isinstance(item, ComponentRef):
                if arities[item.category] > 1:
                    if item.category in seen_multi:
                        continue
                    seen_multi.add(item.category)
                counts[item.category] = counts.get(item.category, 0) + 1
    return counts


def recombine(prods, original: Mcfg, automaton: WeightedAutomaton,
              start_spans=None, trim_output: bool = True) -> RecoveredMcfg:
    """Turn recovered per-component productions back into a tuple grammar.

    Components are paired for every combination that shares an origin rule,
    one production per component index; a component with no partner is
    dropped.  The pairing check alone can produce rules whose right-hand
    sides mention decorated categories heading no production, and it loses
    the weight bookkeeping (per-component chart weights can undercount the
    joint cost of a tuple), so the result is re-weighted exactly: each rule
    instance's weight is its origin weight plus the cheapest automaton edges
    for its terminals, a fixpoint computes every decorated category's best
    derivation weight, and only rules on some best derivation from the start
    survive.  Surviving rules are zeroed and the grammar trimmed.

    ``start_spans`` lists the (start state, final state) pairs of the
    accepting chart items; by default every span recovered for the start
    category is used.  With several spans a fresh super-start category with
    one unit rule per span is added so the minimum is global.
    """
    groups: dict = {}
    for prod in prods:
        groups.setdefault((prod.origin, prod.lhs.index), []).append(prod)

    if start_spans is None:
        start_spans = []
        for prod in prods:
            if prod.lhs.category == original.start \
                    and prod.lhs.span not in start_spans:
                start_spans.append(prod.lhs.span)

    arities = dict(original.categories)
    dec_specs: list = []     # (decorated lhs, rhs components, exact weight)
    dec_seen: dict = {}      # (lhs, comps) -> index into dec_specs
    dec_map: dict = {}       # decorated name -> (base, spans)

    def register(base, spans):
        name = _decorate(base, spans)
        dec_map.setdefault(name, (base, tuple(spans)))
        return name

    for rule in original.rules:
        pools = [groups.get((rule.id, m), []) for m in range(rule.arity)]
        if not all(pools):
            continue
        for combo in itertools.product(*pools):
            spans = tuple(p.lhs.span for p in combo)
            lhs_name = register(rule.lhs, spans)
            # Gather the span tuple of every tuple-category mentioned across
            # the combination; the normal form guarantees each component
            # occurs exactly once, so the tuple is complete.
            multi_spans: dict = {}
            for prod in combo:
                for elem in prod.rhs:
                    if isinstance(elem, AnnotatedRef) \
                            and arities[elem.category] > 1:
                        multi_spans.setdefault(elem.category, {})[elem.index] \
                            = elem.span
            ok = True
            for cat, per_index in multi_spans.items():
                if len(per_index) != arities[cat]:
                    ok = False
                    break
            if not ok:
                continue

            def rewrite(elem):
                if not isinstance(elem, AnnotatedRef):
                    return elem
                if arities[elem.category] > 1:
                    per_index = multi_spans[elem.category]
                    dep_spans = tuple(per_index[k]
                                      for k in range(arities[elem.category]))
                    return ComponentRef(register(elem.category, dep_spans),
                                        elem.index)
                return ComponentRef(register(elem.category, (elem.span,)), 0)

            comps = tuple(tuple(rewrite(e) for e in prod.rhs)
                          for prod in combo)
            weight = rule.weight + sum(
                _component_cost(automaton, prod.lhs.span, prod.rhs)
                for prod in combo)
            key = (lhs_name, comps)
            if key in dec_seen:
                # Distinct origin rules can recombine into the same decorated
                # rule; only the cheapest instance matters.
                ix = dec_seen[key]
                if weight < dec_specs[ix][2]:
                    dec_specs[ix] = (lhs_name, comps, weight)
                continue
            dec_seen[key] = len(dec_specs)
            dec_specs.append((lhs_name, comps, weight))

    start_names = []
    for span in start_spans:
        name = register(original.start, (span,))
        if name not in start_names:
            start_names.append(name)
    headed = {lhs for lhs, _, _ in dec_specs}
    start_names = [name for name in start_names if name in headed]
    if not dec_specs or not start_names:
        return RecoveredMcfg(Mcfg(original.start, [],
                                  categories={original.start: 1}), {})
    if len(start_names) == 1:
        start = start_names[0]
    else:
        start = original.start + "*"
        while start in dec_map:
            start += "*"
        dec_map[start] = (start, ())
        dec_specs = [(start, ((ComponentRef(name, 0),),), 0)
                     for name in start_names] + dec_specs

    dec_arities = {name: arities[base] if base in arities else 1
                   for name, (base, _) in dec_map.items()}

    best = _best_weights(dec_specs, dec_arities)
    keep = _optimal_rules(dec_specs, dec_arities, best, start)
    specs = [(lhs, comps, 0) for ix, (lhs, comps, _) in enumerate(dec_specs)
             if ix in keep]
    categories = {name: dec_arities[name] for name in dec_map}
    grammar = Mcfg(start, specs, categories=categories)
    if trim_output:
        grammar = trim(grammar)
    if grammar.is_empty:
        return RecoveredMcfg(Mcfg(original.start, [],
                                  categories={original.start: 1}), {})
    used = set(grammar.categories)
    decorations = {name: dec_map[name] for name in dec_map if name in used}
    return RecoveredMcfg(grammar, decorations)


def _best_weights(specs, arities) -> dict:
    """Minimum derivation weight of every decorated category (tropical
    fixpoint over the finite decorated grammar)."""
    best: dict = {}
    changed = True
    while changed:
        changed = False
        for lhs, comps, weight in specs:
            total = weight
            for dep, count in _dep_counts(comps, arities).items():
                v = best.get(dep)
                if v is None:
                    total = None
                    break
                total += v * count
            if total is not None and total < best.get(lhs, INF):
                best[lhs] = total
                changed = True
    return best


def _optimal_rules(specs, arities, best, start) -> set:
    """Indices of the rules participating in some minimum-weight derivation
    of the start category.  A rule qualifies when its left-hand side is
    needed and its weight plus its dependencies' best weights meets the
    left-hand side's best weight exactly; every sub-derivation of an optimal
    derivation is itself optimal, so the budget of a needed category is
    always its own best weight."""
    needed = {start}
    keep: set = set()
    changed = True
    while changed:
        changed = False
        for ix, (lhs, comps, weight) in enumerate(specs):
            if ix in keep or lhs not in needed or lhs not in best:
                continue
            deps = _dep_counts(comps, arities)
            total = weight
            for dep, count in deps.items():
                v = best.get(dep)
                if v is None:
                    total = None
                    break
                total += v * count
            if total is not None and total == best[lhs]:
                keep.add(ix)
                changed = True
                for dep in deps:
                    if dep not in needed:
                        needed.add(dep)
    return keep


def strip_decoration(recovered: RecoveredMcfg) -> Mcfg:
    """Rename decorated categories to fresh plain names, preserving language
    and weights.  The first decoration of a base category keeps the base
    name; later ones get ``~2``, ``~3``, ... suffixes.  Distinct decorations
    always map to distinct names."""
    g = recovered.grammar
    if g.is_empty:
        return g
    order = [g.start]
    for rule in g.rules:
        if rule.lhs not in order:
            order.append(rule.lhs)
        for ref in rule.mentioned():
            if ref.category not in order:
                order.append(ref.category)
    bases: dict = {}
    for name in order:
        base, _ = recovered.decorations.get(name, (name, ()))
        bases.setdefault(base, []).append(name)
    renamed: dict = {}
    used: set = set()
    for base, names in bases.items():
        counter = 1
        for name in names:
            candidate = base if counter == 1 else f"{base}~{counter}"
            while candidate in used:
                counter += 1
                candidate = f"{base}~{counter}"
            renamed[name] = candidate
            used.add(candidate)
            counter += 1

    def rewrite(elem):
        if isinstance(elem, ComponentRef):
            return ComponentRef(renamed[elem.category], elem.index)
        return elem

    specs = [(renamed[rule.lhs],
              tuple(tuple(rewrite(e) for e in seq) for seq in rule.rhs),
              rule.weight)
             for rule in g.rules]
    categories = {renamed[name]: arity for name, arity in g.categories.items()}
    return Mcfg(renamed[g.start], specs, categories=categories)
