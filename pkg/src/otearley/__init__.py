"""Weighted Earley intersection of multiple context-free grammars with
finite automata, and the ranked-constraint evaluation loop built on it."""

from .errors import (
    AutomatonError,
    EmptyCandidateSetError,
    FormatError,
    GrammarError,
    OtearleyError,
    RecoveryLimitError,
    ResourceLimitError,
    TierTableError,
)
from .grammar import (
    ComponentRef,
    IndexedCfg,
    IndexedRule,
    Mcfg,
    McfgRule,
    assert_normal_form,
    decompose,
    enumerate_strings,
    format_grammar,
    parse_grammar,
    recompose,
    sample_string,
    trim,
    validate_normal_form,
)
from .fsa import (
    Transition,
    WeightedAutomaton,
    chain_automaton,
    enumerate_accepted,
    format_automaton,
    parse_automaton,
    validate_constraint,
)
from .chart import (
    Chart,
    ChartItem,
    CompleteStep,
    ScanStep,
    accepting_items,
    intersect,
    success_items,
)
from .recovery import (
    AnnotatedProduction,
    AnnotatedRef,
    RecoveredMcfg,
    recombine,
    recover,
    strip_decoration,
)
from .otp import (
    ConstraintRanking,
    TierInventory,
    TierTable,
    decode_table,
    encode_table,
    evaluate,
    format_tier_table,
    from_tier_table,
    gen_redup_grammar,
    intersect_input,
    optimal_intersection,
    parse_tier_table,
    redup_identity_check,
)

__version__ = "0.1.0"
