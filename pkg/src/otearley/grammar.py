"""Multiple context-free grammars: the tuple-yielding grammars used to
describe candidate sets.

A grammar rewrites each category to a tuple of symbol sequences; a plain CFG
is the special case where every category has arity 1.  Rules carry
nonnegative integer weights combined additively along a derivation and
compared by minimum across derivations.

Text format (one rule per line)::

    # comment
    %start S
    S -> A.0 A.1
    A -> (1 , 1)
    A -> (0 A.0 , 0 A.1) @2

Nonterminal references are always written ``Cat.k`` (component ``k`` of
``Cat``); every other token is a terminal.  Arity-1 right-hand sides may omit
the parentheses.  ``@w`` appends a rule weight (default 0).  A grammar with
no rules is written as a single ``%empty`` line after ``%start``.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Union

from .errors import FormatError, GrammarError, ResourceLimitError

DEFAULT_MAX_ARITY = 8
DEFAULT_ENUMERATION_LIMIT = 200_000

INF = float("inf")


@dataclass(frozen=True)
class ComponentRef:
    """Reference to one component of a category's tuple yield."""

    category: str
    index: int

    def __str__(self) -> str:
        return f"{self.category}.{self.index}"


RhsItem = Union[str, ComponentRef]
RhsSeq = tuple  # tuple[RhsItem, ...]


@dataclass(frozen=True)
class McfgRule:
    """A single rewrite rule.  ``rhs`` holds one sequence per component of
    the left-hand category; ``id`` is the 1-based position in the grammar."""

    id: int
    lhs: str
    rhs: tuple
    weight: int = 0

    @property
    def arity(self) -> int:
        return len(self.rhs)

    def mentioned(self):
        """Yield every ComponentRef in the right-hand side."""
        for seq in self.rhs:
            for item in seq:
                if isinstance(item, ComponentRef):
                    yield item


class Mcfg:
    """An immutable grammar: declared categories with arities, ordered
    rules, and a start category of arity 1.

    ``rules`` may be given as ``McfgRule`` objects or ``(lhs, rhs)`` /
    ``(lhs, rhs, weight)`` tuples; ids are always reassigned to the 1-based
    rule position.  ``categories`` maps names to arities and may declare
    categories that head no rule (they are unproductive and removed by
    :func:`trim`); when omitted it is inferred from the rules.
    """

    def __init__(self, start, rules, categories=None, max_arity=DEFAULT_MAX_ARITY):
        built = []
        for pos, spec in enumerate(rules, start=1):
            if isinstance(spec, McfgRule):
                lhs, rhs, weight = spec.lhs, spec.rhs, spec.weight
            elif len(spec) == 2:
                (lhs, rhs), weight = spec, 0
            else:
                lhs, rhs, weight = spec
            rhs = tuple(tuple(seq) for seq in rhs)
            built.append(McfgRule(pos, lhs, rhs, weight))
        self.rules: tuple = tuple(built)
        self.start: str = start

        cats: dict = {}
        for rule in self.rules:
            seen = cats.setdefault(rule.lhs, rule.arity)
            if seen != rule.arity:
                raise GrammarError(
                    f"category {rule.lhs} used with arities {seen} and {rule.arity}")
        if categories:
            for name, arity in categories.items():
                seen = cats.setdefault(name, arity)
                if seen != arity:
                    raise GrammarError(
                        f"category {name} declared with arity {arity} but "
                        f"its rules have arity {seen}")
        if start not in cats:
            cats[start] = 1
        self.categories: dict = cats
        self._validate(max_arity)
        self._by_lhs: dict = {}
        for rule in self.rules:
            self._by_lhs.setdefault(rule.lhs, []).append(rule)

    def _validate(self, max_arity) -> None:
        if self.categories[self.start] != 1:
            raise GrammarError(
                f"start category {self.start} must have arity 1, "
                f"has {self.categories[self.start]}")
        for name, arity in self.categories.items():
            if arity < 1:
                raise GrammarError(f"category {name} has arity {arity} < 1")
            if arity > max_arity:
                raise GrammarError(
                    f"category {name} has arity {arity} > limit {max_arity}")
        for rule in self.rules:
            for cix, seq in enumerate(rule.rhs):
                if not seq:
                    raise GrammarError(
                        f"rule {rule.id} ({rule.lhs}): component {cix} is "
                        "empty (empty yields are not supported)")
            for ref in rule.mentioned():
                if ref.category not in self.categories:
                    raise GrammarError(
                        f"rule {rule.id} ({rule.lhs}) references undeclared "
                        f"category {ref.category}")
                if not 0 <= ref.index < self.categories[ref.category]:
                    raise GrammarError(
                        f"rule {rule.id} ({rule.lhs}) references component "
                        f"{ref} outside arity {self.categories[ref.category]}")
            if rule.weight < 0 or not isinstance(rule.weight, int):
                raise GrammarError(
                    f"rule {rule.id} ({rule.lhs}) has weight {rule.weight!r}; "
                    "weights are nonnegative integers")

    def arity(self, name: str) -> int:
        return self.categories[name]

    def rules_for(self, name: str):
        return self._by_lhs.get(name, [])

    @property
    def is_empty(self) -> bool:
        """True when the grammar has no rules at all (the explicit
        empty-language marker produced by :func:`trim`)."""
        return not self.rules

    def terminals(self) -> set:
        out = set()
        for rule in self.rules:
            for seq in rule.rhs:
                for item in seq:
                    if not isinstance(item, ComponentRef):
                        out.add(item)
        return out

    def __eq__(self, other):
        return (isinstance(other, Mcfg)
                and self.start == other.start
                and self.categories == other.categories
                and self.rules == other.rules)

    def __hash__(self):
        return hash((self.start, self.rules))

    def __repr__(self):
        return (f"Mcfg(start={self.start!r}, rules={len(self.rules)}, "
                f"categories={len(self.categories)})")

    def __str__(self):
        return format_grammar(self)


def validate_normal_form(g: Mcfg) -> list:
    """Check that every rule mentioning a category of arity > 1 uses each of
    its components exactly once across the whole right-hand side.  Returns a
    list of violation descriptions; an empty list means the grammar is in
    normal form."""
    problems = []
    for rule in g.rules:
        counts: dict = {}
        for ref in rule.mentioned():
            if g.arity(ref.category) > 1:
                counts.setdefault(ref.category, {}).setdefault(ref.index, 0)
                counts[ref.category][ref.index] += 1
        for cat, per_index in counts.items():
            for index in range(g.arity(cat)):
                n = per_index.get(index, 0)
                if n != 1:
                    problems.append(
                        f"rule {rule.id} ({rule.lhs}): component {cat}.{index} "
                        f"used {n} times, expected exactly once")
    return problems


def assert_normal_form(g: Mcfg) -> None:
    problems = validate_normal_form(g)
    if problems:
        raise GrammarError("; ".join(problems))


# ---------------------------------------------------------------------------
# Decomposition into an indexed CFG

@dataclass(frozen=True)
class IndexedRule:
    """One component of a grammar rule, split out as a plain CFG rule.  The
    full rule weight rides on component 0 so it is counted once per use;
    ``origin`` is the id of the source rule and ``ix`` the position of this
    rule in the indexed grammar."""

    ix: int
    origin: int
    lhs: ComponentRef
    rhs: tuple
    weight: int


class IndexedCfg:
    """The per-component CFG obtained by splitting every rule of a grammar,
    used for chart construction.  Nonterminals are ComponentRefs."""

    def __init__(self, source: Mcfg):
        assert_normal_form(source)
        self.source = source
        self.start = ComponentRef(source.start, 0)
        rules = []
        for rule in source.rules:
            for cix, seq in enumerate(rule.rhs):
                rules.append(IndexedRule(
                    ix=len(rules),
                    origin=rule.id,
                    lhs=ComponentRef(rule.lhs, cix),
                    rhs=seq,
                    weight=rule.weight if cix == 0 else 0,
                ))
        self.rules: tuple = tuple(rules)
        self.by_lhs: dict = {}
        for rule in self.rules:
            self.by_lhs.setdefault(rule.lhs, []).append(rule)

    def arity(self, name: str) -> int:
        return self.source.arity(name)


def decompose(g: Mcfg) -> IndexedCfg:
    """Split each arity-k rule into k indexed CFG rules sharing the origin
    rule id.  Rejects grammars that fail the normal form."""
    return IndexedCfg(g)


def recompose(icfg: IndexedCfg) -> Mcfg:
    """Rebuild a grammar from an indexed CFG by grouping components by their
    origin rule id; inverse of :func:`decompose` up to rule renumbering."""
    grouped: dict = {}
    order = []
    for rule in icfg.rules:
        if rule.origin not in grouped:
            order.append(rule.origin)
        grouped.setdefault(rule.origin, []).append(rule)
    specs = []
    for origin in order:
        parts = sorted(grouped[origin], key=lambda r: r.lhs.index)
        indices = [p.lhs.index for p in parts]
        if indices != list(range(len(parts))):
            raise GrammarError(
                f"origin rule {origin}: components {indices} do not form a "
                "contiguous tuple")
        lhs = parts[0].lhs.category
        specs.append((lhs, tuple(p.rhs for p in parts),
                      sum(p.weight for p in parts)))
    return Mcfg(icfg.source.start, specs, categories=dict(icfg.source.categories))


# ---------------------------------------------------------------------------
# Trimming

def trim(g: Mcfg) -> Mcfg:
    """Drop rules and categories that cannot take part in a complete
    derivation from the start category (unproductive or unreachable).  The
    generated language and string weights are unchanged.  If the start
    category itself is unproductive the result is the explicit empty-language
    grammar (no rules)."""
    productive: set = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.lhs in productive:
                continue
            if all(ref.category in productive for ref in rule.mentioned()):
                productive.add(rule.lhs)
                changed = True
    if g.start not in productive:
        return Mcfg(g.start, [], categories={g.start: 1})

    usable = [rule for rule in g.rules
              if all(ref.category in productive for ref in rule.mentioned())]
    reachable = {g.start}
    frontier = [g.start]
    by_lhs: dict = {}
    for rule in usable:
        by_lhs.setdefault(rule.lhs, []).append(rule)
    while frontier:
        cat = frontier.pop()
        for rule in by_lhs.get(cat, []):
            for ref in rule.mentioned():
                if ref.category not in reachable:
                    reachable.add(ref.category)
                    frontier.append(ref.category)
    kept = [rule for rule in usable if rule.lhs in reachable]
    cats = {name: g.arity(name) for name in reachable
            if any(r.lhs == name for r in kept) or name == g.start}
    return Mcfg(g.start, [(r.lhs, r.rhs, r.weight) for r in kept],
                categories=cats)


# ---------------------------------------------------------------------------
# Length bookkeeping shared by enumeration and sampling

def _min_component_lengths(g: Mcfg) -> dict:
    """Per category, the minimum yield length of each component (INF when a
    component derives nothing)."""
    inlen = {name: [INF] * arity for name, arity in g.categories.items()}

    def seq_min(seq):
        total = 0
        for item in seq:
            if isinstance(item, ComponentRef):
                total += inlen[item.category][item.index]
            else:
                total += 1
        return total

    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            for cix, seq in enumerate(rule.rhs):
                m = seq_min(seq)
                if m < inlen[rule.lhs][cix]:
                    inlen[rule.lhs][cix] = m
                    changed = True
    return inlen


def _min_outside_lengths(g: Mcfg, inlen: dict) -> dict:
    """Per category, the minimum number of symbols a complete start
    derivation spends outside that category's own yield."""
    outside = {name: INF for name in g.categories}
    outside[g.start] = 0
    total_in = {name: sum(inlen[name]) for name in g.categories}
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            base = outside[rule.lhs]
            if base == INF:
                continue
            rule_min = 0
            for seq in rule.rhs:
                for item in seq:
                    if isinstance(item, ComponentRef):
                        rule_min += inlen[item.category][item.index]
                    else:
                        rule_min += 1
            if rule_min == INF:
                continue
            seen = set()
            for ref in rule.mentioned():
                cat = ref.category
                if g.arity(cat) > 1:
                    if cat in seen:
                        continue
                    seen.add(cat)
                    occ = base + rule_min - total_in[cat]
                else:
                    occ = base + rule_min - inlen[cat][0]
                if occ < outside[cat]:
                    outside[cat] = occ
                    changed = True
    return outside


def _rule_slots(g: Mcfg, rule: McfgRule):
    """Flatten a rule into (component, element) pairs plus the ordered list
    of arity>1 dependency categories, which are substituted once per rule
    use (arity-1 references are substituted per occurrence)."""
    flat = []
    multi = []
    for cix, seq in enumerate(rule.rhs):
        for item in seq:
            flat.append((cix, item))
            if isinstance(item, ComponentRef) and g.arity(item.category) > 1 \
                    and item.category not in multi:
                multi.append(item.category)
    return flat, multi


# ---------------------------------------------------------------------------
# Enumeration oracle

def enumerate_strings(g: Mcfg, max_len: int,
                      limit: int = DEFAULT_ENUMERATION_LIMIT) -> dict:
    """All strings of length <= max_len derivable from the start category,
    mapped to their minimum derivation weight.  Strings are tuples of
    terminal tokens.

    This is a direct bottom-up expansion of the derivation semantics,
    independent of the chart machinery, intended as a test oracle and for
    small grammars.  Raises ResourceLimitError when the table of
    intermediate tuples exceeds ``limit`` entries.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    inlen = _min_component_lengths(g)
    outside = _min_outside_lengths(g, inlen)

    table: dict = {name: {} for name in g.categories}
    slot_cache = {rule.id: _rule_slots(g, rule) for rule in g.rules}

    def expansions(rule, budget):
        flat, multi = slot_cache[rule.id]
        sufmin = [0] * (len(flat) + 1)
        for i in range(len(flat) - 1, -1, -1):
            _, item = flat[i]
            m = (inlen[item.category][item.index]
                 if isinstance(item, ComponentRef) else 1)
            sufmin[i] = sufmin[i + 1] + m

        def walk(i, binding, parts, cur_len, cur_w):
            if cur_len + sufmin[i] > budget:
                return
            if i == len(flat):
                yield tuple(tuple(p) for p in parts), cur_w
                return
            cix, item = flat[i]
            if not isinstance(item, ComponentRef):
                parts[cix].append(item)
                yield from walk(i + 1, binding, parts, cur_len + 1, cur_w)
                parts[cix].pop()
                return
            cat = item.category
            if g.arity(cat) > 1:
                if cat in binding:
                    tokens = binding[cat][item.index]
                    parts[cix].extend(tokens)
                    yield from walk(i + 1, binding, parts,
                                    cur_len + len(tokens), cur_w)
                    if tokens:
                        del parts[cix][-len(tokens):]
                    return
                for comps, w in list(table[cat].items()):
                    binding[cat] = comps
                    tokens = comps[item.index]
                    parts[cix].extend(tokens)
                    yield from walk(i + 1, binding, parts,
                                    cur_len + len(tokens), cur_w + w)
                    if tokens:
                        del parts[cix][-len(tokens):]
                    del binding[cat]
                return
            for comps, w in list(table[cat].items()):
                tokens = comps[0]
                parts[cix].extend(tokens)
                yield from walk(i + 1, binding, parts,
                                cur_len + len(tokens), cur_w + w)
                if tokens:
                    del parts[cix][-len(tokens):]

        parts = [[] for _ in rule.rhs]
        yield from walk(0, {}, parts, 0, rule.weight)

    size = 0
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            budget = max_len - outside[rule.lhs]
            if budget < 0:
                continue
            bucket = table[rule.lhs]
            for comps, w in expansions(rule, budget):
                old = bucket.get(comps)
                if old is None:
                    size += 1
                    if size > limit:
                        raise ResourceLimitError(
                            f"enumeration exceeded {limit} intermediate tuples")
                if old is None or w < old:
                    bucket[comps] = w
                    changed = True

    return {comps[0]: w for comps, w in table[g.start].items()
            if len(comps[0]) <= max_len}


# ---------------------------------------------------------------------------
# Random derivation sampling

def sample_string(g: Mcfg, rng: Random, max_len=None,
                  max_expansions: int = 2000, attempts: int = 200):
    """Draw a random complete derivation (uniform rule choice at each step)
    and return ``(tokens, weight)``.  Retries when a draw blows past
    ``max_expansions`` rule applications or ``max_len`` symbols; raises
    ResourceLimitError when every attempt fails."""
    if g.is_empty:
        raise GrammarError("cannot sample from an empty grammar")

    class _Blown(Exception):
        pass

    def derive(cat, state):
        rules = g.rules_for(cat)
        if not rules:
            raise _Blown
        state[0] += 1
        if state[0] > max_expansions:
            raise _Blown
        rule = rules[rng.randrange(len(rules))]
        binding = {}
        weight = rule.weight
        comps = []
        for seq in rule.rhs:
            tokens = []
            for item in seq:
                if not isinstance(item, ComponentRef):
                    tokens.append(item)
                    continue
                if g.arity(item.category) > 1:
                    if item.category not in binding:
                        binding[item.category] = derive(item.category, state)
                    sub_comps, sub_w = binding[item.category]
                    if sub_w is not None:
                        binding[item.category] = (sub_comps, None)
                        weight += sub_w
                    tokens.extend(sub_comps[item.index])
                else:
                    sub_comps, sub_w = derive(item.category, state)
                    weight += sub_w
                    tokens.extend(sub_comps[0])
            comps.append(tuple(tokens))
        return tuple(comps), weight

    for _ in range(attempts):
        try:
            comps, weight = derive(g.start, [0])
        except _Blown:
            continue
        tokens = comps[0]
        if max_len is not None and len(tokens) > max_len:
            continue
        return tokens, weight
    raise ResourceLimitError(
        f"no derivation found within {attempts} attempts "
        f"(max_expansions={max_expansions}, max_len={max_len})")


# ---------------------------------------------------------------------------
# Text format

def _tokenize_rhs(text: str, lineno: int):
    tokens = text.split()
    if not tokens:
        raise FormatError(f"line {lineno}: empty right-hand side")
    weight = 0
    if tokens[-1].startswith("@"):
        try:
            weight = int(tokens[-1][1:])
        except ValueError:
            raise FormatError(f"line {lineno}: bad weight {tokens[-1]!r}")
        if weight < 0:
            raise FormatError(f"line {lineno}: negative weight {weight}")
        tokens = tokens[:-1]
        if not tokens:
            raise FormatError(f"line {lineno}: weight with no body")
    if tokens[0].startswith("(") and tokens[-1].endswith(")"):
        tokens[0] = tokens[0][1:]
        tokens[-1] = tokens[-1][:-1]
        tokens = [t for t in tokens if t]
    comps = [[]]
    for tok in tokens:
        if tok == ",":
            comps.append([])
        else:
            comps[-1].append(tok)
    if any(not comp for comp in comps):
        raise FormatError(f"line {lineno}: empty component sequence")
    return comps, weight


def parse_grammar(text: str) -> Mcfg:
    """Parse the grammar text format; see the module docstring."""
    start = None
    empty = False
    raw_rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("%start"):
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: %start takes one name")
            start = parts[1]
            continue
        if line == "%empty":
            empty = True
            continue
        if line.startswith("%"):
            raise FormatError(f"line {lineno}: unknown directive {line!r}")
        if "->" not in line:
            raise FormatError(f"line {lineno}: expected 'LHS -> ...'")
        lhs, _, body = line.partition("->")
        lhs = lhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise FormatError(f"line {lineno}: bad left-hand side {lhs!r}")
        comps, weight = _tokenize_rhs(body, lineno)
        raw_rules.append((lineno, lhs, comps, weight))

    if empty and raw_rules:
        raise FormatError("%empty cannot be combined with rules")
    if start is None:
        if raw_rules:
            start = raw_rules[0][1]
        else:
            raise FormatError("missing %start directive")

    cats = {lhs for _, lhs, _, _ in raw_rules}

    def resolve(token, lineno):
        name, dot, index = token.rpartition(".")
        if dot and name in cats and index.isdigit():
            return ComponentRef(name, int(index))
        if dot and name and index.isdigit():
            raise FormatError(
                f"line {lineno}: {token!r} looks like a component reference "
                f"but {name!r} heads no rule")
        return token

    specs = []
    for lineno, lhs, comps, weight in raw_rules:
        rhs = tuple(tuple(resolve(tok, lineno) for tok in comp)
                    for comp in comps)
        specs.append((lhs, rhs, weight))
    try:
        return Mcfg(start, specs)
    except GrammarError as exc:
        raise FormatError(str(exc)) from exc


def _check_common(token: str, kind: str) -> str:
    bad = (not token or any(ch.isspace() for ch in token) or "#" in token
           or token == "," or token.startswith(("(", "%", "@")))
    if bad:
        raise FormatError(f"{kind} {token!r} cannot be written in the text format")
    return token


def _check_name(token: str) -> str:
    _check_common(token, "category name")
    if "." in token:
        raise FormatError(f"category name {token!r} contains '.'")
    return token


def _check_terminal(token: str) -> str:
    # A trailing ')' would be eaten by the tuple syntax; category names may
    # end with ')' because references always end in '.k'.
    _check_common(token, "terminal")
    if token.endswith(")"):
        raise FormatError(f"terminal {token!r} cannot end with ')'")
    return token


def format_grammar(g: Mcfg) -> str:
    """Serialize a grammar to its canonical text form (stable bytes)."""
    lines = [f"%start {_check_name(g.start)}"]
    if g.is_empty:
        lines.append("%empty")
    for rule in g.rules:
        def render(item):
            if isinstance(item, ComponentRef):
                _check_name(item.category)
                return f"{item.category}.{item.index}"
            return _check_terminal(item)
        comps = [" ".join(render(item) for item in seq) for seq in rule.rhs]
        if len(comps) == 1:
            body = comps[0]
        else:
            body = "(" + " , ".join(comps) + ")"
        suffix = f" @{rule.weight}" if rule.weight else ""
        lines.append(f"{rule.lhs} -> {body}{suffix}")
    return "\n".join(lines) + "\n"
