"""Shared test helpers: an independent minimum-weight oracle over the
grammar/automaton product, a random case generator, and chart
canonicalization for order-independence checks.

The oracle computes, by a bottom-up tropical fixpoint over (category, span
tuple) nodes, the exact minimum combined weight of any derivation whose
string the automaton accepts.  It shares no code with the chart engine or
recovery: rules are instantiated by direct enumeration of state boundaries.
"""

from __future__ import annotations

import itertools
from random import Random

from otearley import ComponentRef, Mcfg, Transition, WeightedAutomaton
from otearley.errors import ResourceLimitError

INF = float("inf")


def min_edge_table(a: WeightedAutomaton) -> dict:
    table: dict = {}
    for t in a.transitions:
        key = (t.src, t.label, t.dst)
        if key not in table or t.weight < table[key]:
            table[key] = t.weight
    return table


def _component_instances(seq, span, states, edges, arities):
    """Yield (cost, bindings) for every way of threading one rule component
    from span[0] to span[1]; bindings maps (category, index) -> span for the
    nonterminal occurrences (arity-1 occurrences are position-tagged)."""
    k = len(seq)
    inner = [states] * (k - 1)
    for mids in itertools.product(*inner):
        bounds = (span[0],) + mids + (span[1],)
        cost = 0
        bindings = []
        ok = True
        for ix, item in enumerate(seq):
            lo, hi = bounds[ix], bounds[ix + 1]
            if isinstance(item, ComponentRef):
                bindings.append((item, (lo, hi), ix))
            else:
                w = edges.get((lo, item, hi))
                if w is None:
                    ok = False
                    break
                cost += w
        if ok:
            yield cost, bindings


def tropical_minimum(g: Mcfg, a: WeightedAutomaton):
    """Exact minimum combined (rule + edge) weight over all strings of the
    grammar the automaton accepts, or None when the intersection is empty."""
    if g.is_empty:
        return None
    states = sorted(a.states)
    edges = min_edge_table(a)
    arities = g.categories

    instances = []  # (lhs_node, base_cost, dep_nodes)
    for rule in g.rules:
        span_choices = [
            [( (lo, hi), list(_component_instances(seq, (lo, hi), states,
                                                   edges, arities)))
             for lo in states for hi in states]
            for seq in rule.rhs
        ]
        for combo in itertools.product(*[
                [(span, inst) for span, insts in per_comp for inst in insts]
                for per_comp in span_choices]):
            spans = tuple(span for span, _ in combo)
            cost = rule.weight + sum(inst[0] for _, inst in combo)
            multi: dict = {}
            singles = []
            ok = True
            for _, (_, bindings) in combo:
                for ref, span, _pos in bindings:
                    if arities[ref.category] > 1:
                        per = multi.setdefault(ref.category, {})
                        if ref.index in per and per[ref.index] != span:
                            ok = False
                            break
                        per[ref.index] = span
                    else:
                        singles.append((ref.category, (span,)))
                if not ok:
                    break
            if not ok:
                continue
            deps = list(singles)
            complete = True
            for cat, per in multi.items():
                if len(per) != arities[cat]:
                    complete = False
                    break
                deps.append((cat, tuple(per[i] for i in range(arities[cat]))))
            if not complete:
                continue
            instances.append(((rule.lhs, spans), cost, deps))

    best: dict = {}
    changed = True
    while changed:
        changed = False
        for node, cost, deps in instances:
            total = cost
            for dep in deps:
                v = best.get(dep)
                if v is None:
                    total = None
                    break
                total += v
            if total is not None and total < best.get(node, INF):
                best[node] = total
                changed = True
    finals = [best.get((g.start, ((a.start, f),))) for f in a.finals]
    finals = [v for v in finals if v is not None]
    return min(finals) if finals else None


def brute_survivors(g: Mcfg, a: WeightedAutomaton, max_len: int):
    """The argmin filter computed by brute force: enumerate both languages,
    sum the weights per string, and keep the strings (up to max_len) whose
    combined weight equals the exact global minimum."""
    from otearley import enumerate_accepted, enumerate_strings
    gmin = tropical_minimum(g, a)
    if gmin is None:
        return set()
    lg = enumerate_strings(g, max_len)
    la = enumerate_accepted(a, max_len)
    return {x for x in lg.keys() & la.keys() if lg[x] + la[x] == gmin}


# ---------------------------------------------------------------------------
# Random cases

def random_grammar(rng: Random, alphabet=("0", "1", "2")) -> Mcfg:
    """A small normal-form grammar over up to three extra categories with
    arities <= 2; may be recursive."""
    sigma = list(alphabet[:rng.randint(1, len(alphabet))])
    extra = [("B", rng.choice((1, 2))), ("C", rng.choice((1, 2))),
             ("D", rng.choice((1, 2)))][:rng.randint(0, 3)]
    cats = {"S": 1, **dict(extra)}
    names = list(cats)

    def build_rule(lhs):
        arity = cats[lhs]
        deps = []
        for name in names:
            if rng.random() < 0.35:
                deps.append(name)
        rng.shuffle(deps)
        slots = []
        for dep in deps:
            for index in range(cats[dep]):
                slots.append(ComponentRef(dep, index))
        comps = [[] for _ in range(arity)]
        for slot in slots:
            comps[rng.randrange(arity)].append(slot)
        for comp in comps:
            for _ in range(rng.randint(0, 2)):
                comp.insert(rng.randint(0, len(comp)), rng.choice(sigma))
            if not comp:
                comp.append(rng.choice(sigma))
        weight = rng.choice((0, 0, 1, 2, 3))
        return lhs, tuple(tuple(c) for c in comps), weight

    n_rules = rng.randint(3, 10)
    specs = [build_rule("S")]
    for _ in range(n_rules - 1):
        specs.append(build_rule(rng.choice(names)))
    return Mcfg("S", specs, categories=cats)


def random_automaton(rng: Random, alphabet=("0", "1", "2")) -> WeightedAutomaton:
    n = rng.randint(1, 4)
    states = list(range(1, n + 1))
    transitions = []
    for src in states:
        for label in alphabet:
            for _ in range(rng.choice((0, 1, 1, 2))):
                transitions.append(Transition(
                    src, label, rng.choice((0, 0, 1, 2, 3)),
                    rng.choice(states)))
    finals = [s for s in states if rng.random() < 0.5]
    if not finals and rng.random() < 0.8:
        finals = [rng.choice(states)]
    return WeightedAutomaton(1, finals, transitions)


def random_cases(seed: int, count: int, max_len: int = 6):
    """Yield ``count`` (grammar, automaton) pairs usable for end-to-end
    comparison (the grammar survives trimming and both enumerations stay
    inside their resource budgets)."""
    from otearley import enumerate_accepted, enumerate_strings, trim
    rng = Random(seed)
    produced = 0
    attempts = 0
    while produced < count:
        attempts += 1
        if attempts > count * 60:
            raise RuntimeError("random case generation stalled")
        try:
            g = trim(random_grammar(rng))
            if g.is_empty:
                continue
            a = random_automaton(rng)
            enumerate_strings(g, max_len, limit=60_000)
            enumerate_accepted(a, max_len, limit=60_000)
        except ResourceLimitError:
            continue
        produced += 1
        yield g, a


def canonical_chart(chart) -> dict:
    """Address-free view of a chart: item keys mapped to their weight and
    the history entries rewritten to reference item keys, for comparing
    closures computed under different agenda orders."""
    from otearley.chart import ScanStep

    def key_of(item):
        return (item.rule.ix, item.dot, item.i, item.j)

    out = {}
    for item in chart.items():
        entries = set()
        for entry in item.hist:
            if isinstance(entry, ScanStep):
                entries.add(("s", key_of(chart.item(entry.src))))
            else:
                entries.add(("c", key_of(chart.item(entry.completed)),
                             key_of(chart.item(entry.extended))))
        full = set()
        for entry in item.hist_full:
            if isinstance(entry, ScanStep):
                full.add(("s", key_of(chart.item(entry.src))))
            else:
                full.add(("c", key_of(chart.item(entry.completed)),
                          key_of(chart.item(entry.extended))))
        out[key_of(item)] = (item.weight, frozenset(entries), frozenset(full))
    return out
