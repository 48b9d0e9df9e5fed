import random

import pytest

from otearley import (
    ConstraintRanking,
    EmptyCandidateSetError,
    GrammarError,
    Mcfg,
    TierInventory,
    TierTable,
    TierTableError,
    Transition,
    WeightedAutomaton,
    decode_table,
    encode_table,
    enumerate_accepted,
    enumerate_strings,
    evaluate,
    format_grammar,
    format_tier_table,
    from_tier_table,
    gen_redup_grammar,
    intersect_input,
    parse_tier_table,
    presets,
    redup_identity_check,
    sample_string,
    validate_normal_form,
)
from otearley import chain_automaton, optimal_intersection

T = Transition

REDUP_GRAMMAR_CV_RED_FIRST = """\
%start S
S -> Non.0 Rd.0 Non.0
S -> Rd.0 Non.0
S -> Non.0 Rd.0
S -> Rd.0
Non -> SSR.0 UR.0 MRD.0 NBR.0
Non -> Non.0 SSR.0 UR.0 MRD.0 NBR.0
SSR -> A.0 A.0
UR -> A.0 A.0
MRD -> - -
Rd -> Rd1.0 Rd1.1 Rd1.2
BDR -> (BDR0.0 BDR1.0 , BDR0.1 BDR1.1)
BDL -> (BDL0.0 BDL1.0 , BDL0.1 BDL1.1)
B -> (B0.0 B1.0 , B0.1 B1.1)
A -> -
A -> +
A -> [
A -> ]
A -> |
BDR0 -> (- , -)
BDR0 -> (+ , +)
BDR0 -> ([ , [)
BDR0 -> (] , -)
BDR0 -> (| , [)
BDR1 -> (- , -)
BDR1 -> (+ , +)
BDR1 -> ([ , [)
BDR1 -> (] , -)
BDR1 -> (| , [)
BDL0 -> (- , -)
BDL0 -> (+ , +)
BDL0 -> ([ , -)
BDL0 -> (] , ])
BDL0 -> (| , ])
BDL1 -> (- , -)
BDL1 -> (+ , +)
BDL1 -> ([ , -)
BDL1 -> (] , ])
BDL1 -> (| , ])
B0 -> (- , -)
B0 -> (+ , +)
B0 -> ([ , [)
B0 -> (] , ])
B0 -> (| , |)
B1 -> (- , -)
B1 -> (+ , +)
B1 -> ([ , [)
B1 -> (] , ])
B1 -> (| , |)
NBR -> A.0 A.0 - - -
RLE -> A.0 A.0 - [ -
RRE -> A.0 A.0 - ] -
BLE -> A.0 A.0 A.0 - [
BRE -> A.0 A.0 A.0 - ]
RB -> A.0 A.0 A.0 ] [
BR -> A.0 A.0 A.0 [ ]
RED -> A.0 A.0 - + -
BAS -> A.0 A.0 A.0 - +
Rd1 -> (BDR.0 UR.0 MRD.0 RLE.0 Rd2.0 , BDL.0 UR.0 BDR.1 RB.0 Rd2.1 , SSR.0 UR.0 BDL.1 BRE.0)
Rd2 -> (B.0 UR.0 MRD.0 RED.0 , SSR.0 UR.0 B.1 BAS.0)
Rd2 -> (Rd2.0 B.0 UR.0 MRD.0 RED.0 , Rd2.1 SSR.0 UR.0 B.1 BAS.0)
"""

BASE_FIRST_RD_RULES = [
    "Rd1 -> (SSR.0 UR.0 BDR.1 BLE.0 Rd2.0 , BDR.0 UR.0 BDL.1 BR.0 Rd2.1 , "
    "BDL.0 UR.0 MRD.0 RRE.0)",
    "Rd2 -> (SSR.0 UR.0 B.1 BAS.0 , B.0 UR.0 MRD.0 RED.0)",
    "Rd2 -> (Rd2.0 SSR.0 UR.0 B.1 BAS.0 , Rd2.1 B.0 UR.0 MRD.0 RED.0)",
]


def vacuous(alphabet=("0", "1")):
    return WeightedAutomaton(1, [1], [T(1, sym, 0, 1) for sym in alphabet])


# -- tier inventories and tables ---------------------------------------------

def test_inventory_order_and_size():
    inv = TierInventory(["C", "V"])
    assert inv.tier_names == ("C", "V", "C_u", "V_u", "C_r", "V_r",
                              "INS", "DEL", "RDEL", "RED", "BASE")
    assert inv.size == 3 * 2 + 5


def test_inventory_rejects_bad_names():
    with pytest.raises(TierTableError):
        TierInventory([])
    with pytest.raises(TierTableError):
        TierInventory(["C", "C"])
    with pytest.raises(TierTableError):
        TierInventory(["INS"])
    with pytest.raises(TierTableError):
        TierInventory(["C", "C_u"])


def test_inventory_from_tier_names_round_trip():
    inv = TierInventory(["C", "V"])
    assert TierInventory.from_tier_names(inv.tier_names) == inv
    with pytest.raises(TierTableError):
        TierInventory.from_tier_names(("C", "V", "INS"))


def test_table_rejects_ragged_and_bad_symbols():
    with pytest.raises(TierTableError):
        TierTable(["C", "V"], [("-",)])
    with pytest.raises(TierTableError):
        TierTable(["C"], [("x",)])


def test_encode_two_tier_fragment():
    table = TierTable(["C", "V"], [("[", "-"), ("+", "-"), ("]", "-")])
    assert encode_table(table) == "[-+-]-"
    assert decode_table("[-+-]-", ["C", "V"]) == table


def test_encode_decode_empty():
    table = TierTable(["C"], [])
    assert encode_table(table) == ""
    assert decode_table("", ["C"]) == table


def test_cv_reduplication_table_round_trips():
    table = presets.cv_reduplication_table()
    assert len(table.tier_names) == 11
    assert len(table.slices) == 13
    flat = encode_table(table)
    assert decode_table(flat, TierInventory(["C", "V"])) == table
    assert format_tier_table(table) == presets.CV_REDUPLICATION_TABLE


def test_decode_rejects_bad_input():
    with pytest.raises(TierTableError):
        decode_table("[-+", ["C", "V"])
    with pytest.raises(TierTableError):
        decode_table("[x", ["C", "V"])


def test_parse_tier_table_rejects_ragged():
    with pytest.raises(TierTableError):
        parse_tier_table("C: - -\nV: -\n")


def test_from_tier_table_is_straight_line():
    table = presets.syllable_score_table()
    assert len(table.tier_names) == 6
    assert len(table.slices) == 9
    a = from_tier_table(table)
    assert len(a.transitions) == len(table.tier_names) * len(table.slices)
    accepted = enumerate_accepted(a, len(a.transitions))
    assert accepted == {table.flatten(): 0}


def test_from_tier_table_empty():
    a = from_tier_table(TierTable(["C"], []))
    assert a.start in a.finals and not a.transitions


# -- reduplicative identity ---------------------------------------------------

def test_identity_check_accepts_cv_table():
    assert redup_identity_check(presets.cv_reduplication_table()) == []


def test_identity_check_reports_flipped_cell():
    table = presets.cv_reduplication_table()
    cols = [list(col) for col in table.slices]
    cr = table.tier_names.index("C_r")
    assert cols[7][cr] == "+"
    cols[7][cr] = "-"
    broken = TierTable(table.tier_names, cols)
    problems = redup_identity_check(broken)
    assert len(problems) == 1
    assert "C_r" in problems[0] and "slice 7" in problems[0]


def test_identity_check_requires_equal_spans():
    inv = TierInventory(["C"])
    # RED spans two slices, BASE three
    rows = {
        "C": "[ ] - - -", "C_u": "- - - - -", "C_r": "- - [ ] -",
        "INS": "- - - - -", "DEL": "- - - - -", "RDEL": "- - - - -",
        "RED": "[ ] - - -", "BASE": "- - [ + ]",
    }
    table = parse_tier_table(
        "\n".join(f"{name}: {rows[name]}" for name in inv.tier_names))
    problems = redup_identity_check(table)
    assert any("2 slices" in p and "3 slices" in p for p in problems)


def test_identity_check_skips_rdel_marked_time():
    inv = TierInventory(["C"])
    rows_ok = {
        "C": "[ ] - -", "C_u": "- - - -", "C_r": "- - [ -",
        "INS": "- - - -", "DEL": "- - - -", "RDEL": "- - - [",
        "RED": "[ ] - -", "BASE": "- - [ ]",
    }
    table = parse_tier_table(
        "\n".join(f"{name}: {rows_ok[name]}" for name in inv.tier_names))
    # slice 3 is RDEL-marked, so its reference cell is exempt; slice 2
    # copies the right half of the RED-initial '['
    assert redup_identity_check(table) == []


def test_identity_check_vacuous_without_spans():
    inv = TierInventory(["C"])
    empty = decode_table("-" * inv.size * 2, inv)
    assert redup_identity_check(empty) == []


def test_identity_check_requires_full_layout():
    with pytest.raises(TierTableError):
        redup_identity_check(TierTable(["C", "V"], []))


# -- the reduplication grammar ------------------------------------------------

def test_redup_grammar_cv_red_first_matches_expected_rules():
    g = gen_redup_grammar(["C", "V"], "red-first")
    assert format_grammar(g) == REDUP_GRAMMAR_CV_RED_FIRST


def test_redup_grammar_base_first_swaps_rd_rules():
    g = gen_redup_grammar(["C", "V"], "base-first")
    lines = format_grammar(g).splitlines()
    assert lines[-3:] == BASE_FIRST_RD_RULES
    shared = [ln for ln in lines if not ln.startswith(("Rd1", "Rd2"))]
    expected_shared = [ln for ln in REDUP_GRAMMAR_CV_RED_FIRST.splitlines()
                       if not ln.startswith(("Rd1", "Rd2"))]
    assert shared == expected_shared


def test_redup_grammar_rejects_no_tiers():
    with pytest.raises((GrammarError, TierTableError)):
        gen_redup_grammar([])


def test_redup_grammar_is_normal_form():
    for direction in ("red-first", "base-first"):
        for tiers in (["C"], ["C", "V"], ["C", "V", "N"]):
            assert validate_normal_form(gen_redup_grammar(tiers, direction)) == []


def test_redup_grammar_rejects_bad_direction():
    with pytest.raises(GrammarError):
        gen_redup_grammar(["C"], "sideways")


@pytest.mark.parametrize("direction", ["red-first", "base-first"])
def test_redup_grammar_nothing_below_five_slices(direction):
    g = gen_redup_grammar(["C"], direction)
    assert enumerate_strings(g, 4 * 8) == {}


@pytest.mark.parametrize("direction", ["red-first", "base-first"])
def test_redup_samples_decode_and_pass_identity(direction):
    g = gen_redup_grammar(["C"], direction)
    inv = TierInventory(["C"])
    rng = random.Random(20260810)
    slice_counts = set()
    for _ in range(400):
        tokens, weight = sample_string(g, rng, max_len=10 * inv.size)
        assert weight == 0
        assert len(tokens) % inv.size == 0
        slice_counts.add(len(tokens) // inv.size)
        table = decode_table(tokens, inv)
        assert redup_identity_check(table) == []
    assert min(slice_counts) == 5


@pytest.mark.parametrize("direction", ["red-first", "base-first"])
def test_redup_exhaustive_over_pinned_free_tiers(direction):
    # Collapsing the free-choice category to '-' leaves exactly the copy
    # machinery; its full language up to six slices is small enough to
    # check exhaustively.
    g = gen_redup_grammar(["C"], direction)
    pinned = Mcfg("S", [(r.lhs, r.rhs, r.weight) for r in g.rules
                        if r.lhs != "A" or r.rhs == (("-",),)])
    inv = TierInventory(["C"])
    found = enumerate_strings(pinned, 6 * inv.size)
    assert found
    for tokens in found:
        table = decode_table(tokens, inv)
        assert redup_identity_check(table) == []


def test_redup_two_tier_samples_pass_identity():
    g = gen_redup_grammar(["C", "V"], "red-first")
    inv = TierInventory(["C", "V"])
    rng = random.Random(4)
    for _ in range(100):
        tokens, _ = sample_string(g, rng, max_len=8 * inv.size)
        table = decode_table(tokens, inv)
        assert redup_identity_check(table) == []


def test_redup_grammar_carries_direction_specific_slack():
    # each direction uses six of the nine flag categories; the other three
    # are emitted for completeness and fall to trimming
    from otearley import trim
    red = gen_redup_grammar(["C", "V"], "red-first")
    base = gen_redup_grammar(["C", "V"], "base-first")
    assert sorted(set(red.categories) - set(trim(red).categories)) == \
        ["BLE", "BR", "RRE"]
    assert sorted(set(base.categories) - set(trim(base).categories)) == \
        ["BRE", "RB", "RLE"]


def test_pipeline_handles_three_part_categories():
    # the reduplication grammar sends an arity-3 category through the
    # chart, recovery and recombination; a vacuous constraint must give
    # the language back and a weighted one must keep the zero-violation
    # forms only
    g = gen_redup_grammar(["C"], "red-first")
    pinned = Mcfg("S", [(r.lhs, r.rhs, r.weight) for r in g.rules
                        if r.lhs != "A" or r.rhs == (("-",),)])
    inv = TierInventory(["C"])
    vac = WeightedAutomaton(1, [1],
                            [T(1, s, 0, 1) for s in "-+[]|"])
    out = optimal_intersection(pinned, vac)
    full = set(enumerate_strings(pinned, 6 * inv.size))
    assert set(enumerate_strings(out, 6 * inv.size)) == full

    no_pipes = WeightedAutomaton(1, [1], [
        T(1, s, 1 if s == "|" else 0, 1) for s in "-+[]|"])
    out2 = optimal_intersection(pinned, no_pipes)
    assert set(enumerate_strings(out2, 6 * inv.size)) == \
        {x for x in full if "|" not in x}


# -- evaluation ----------------------------------------------------------------

def test_evaluate_single_constraint_golden(ww, final_zero):
    out = evaluate(ww, [final_zero])
    got = {"".join(x) for x in enumerate_strings(out, 6)}
    expected = {w + w for n in range(1, 4)
                for w in ("".join(bits) for bits in
                          __import__("itertools").product("01", repeat=n))
                if w.endswith("1")}
    assert got == expected


def test_evaluate_vacuous_preserves_language(ww):
    out = evaluate(ww, ConstraintRanking([vacuous()]))
    assert set(enumerate_strings(out, 6)) == set(enumerate_strings(ww, 6))


def test_evaluate_two_constraints_matches_brute_filter(ww, final_zero):
    ones = WeightedAutomaton(1, [1], [T(1, "0", 0, 1), T(1, "1", 1, 1)])
    out = evaluate(ww, [final_zero, ones])
    got = set(enumerate_strings(out, 6))

    cands = set(enumerate_strings(ww, 6))
    stage1_w = {x: enumerate_accepted(final_zero, 6)[x] for x in cands}
    best1 = min(stage1_w.values())
    stage1 = {x for x, v in stage1_w.items() if v == best1}
    stage2_w = {x: enumerate_accepted(ones, 6)[x] for x in stage1}
    best2 = min(stage2_w.values())
    expected = {x for x, v in stage2_w.items() if v == best2}
    assert got == expected
    assert {"".join(x) for x in got} == {"11", "0101", "001001"}


def test_evaluate_idempotent_per_constraint(ww, final_zero):
    once = evaluate(ww, [final_zero])
    twice = evaluate(once, [final_zero])
    assert set(enumerate_strings(twice, 6)) == set(enumerate_strings(once, 6))


def test_evaluate_empty_candidates_pass_through():
    empty = Mcfg("S", [], categories={"S": 1})
    assert evaluate(empty, [vacuous()]).is_empty


def test_evaluate_raises_when_constraint_rejects_everything(ww):
    only_a = WeightedAutomaton(1, [1], [T(1, "a", 0, 1)])
    with pytest.raises(EmptyCandidateSetError):
        evaluate(ww, [only_a])


def test_ranking_reports_problems(final_zero):
    ranking = ConstraintRanking([vacuous(), final_zero])
    problems = ranking.problems()
    assert all(rank == 1 for rank, _ in problems)
    assert ConstraintRanking([vacuous()]).problems() == []


# -- input intersection ---------------------------------------------------------

def test_intersect_input_straight_line(ww):
    out = intersect_input(ww, chain_automaton("0101"))
    assert set(enumerate_strings(out, 6)) == {tuple("0101")}


def test_intersect_input_odd_length_is_empty(ww):
    out = intersect_input(ww, chain_automaton("010"))
    assert out.is_empty


def test_intersect_input_universal_is_identity(ww):
    out = intersect_input(ww, vacuous())
    assert set(enumerate_strings(out, 6)) == set(enumerate_strings(ww, 6))


def test_intersect_input_warns_on_weights(ww):
    weighted = WeightedAutomaton(1, [1], [T(1, "0", 1, 1), T(1, "1", 0, 1)])
    with pytest.warns(UserWarning):
        intersect_input(ww, weighted)
