"""Worked-example inputs shipped with the package, in the text formats the
parsers read.  The same texts appear verbatim in the README."""

from __future__ import annotations

from .fsa import WeightedAutomaton, parse_automaton
from .grammar import Mcfg, parse_grammar
from .otp import TierTable, parse_tier_table

#: Total reduplication: the language {ww : w over 0/1, w nonempty}.
TOTAL_REDUPLICATION_GRAMMAR = """\
%start S
S -> A.0 A.1
A -> (1 , 1)
A -> (0 , 0)
A -> (0 A.0 , 0 A.1)
A -> (1 A.0 , 1 A.1)
"""

#: Accepts every nonempty 0/1 string; charges one violation to strings
#: ending in 0 (the machine guesses the final symbol, so it is
#: nondeterministic and only its sink state accepts).
FINAL_ZERO_PENALTY_AUTOMATON = """\
%start 1
%final 2
1 0 0 1
1 0 1 2
1 1 0 1
1 1 0 2
"""

#: A CV+CVC prefixing-reduplication gestural score over surface tiers C and
#: V: the reduplicant spans slices 0-6, the base slices 6-12, and the
#: reference tiers C_r/V_r inside the base copy the reduplicant's surface.
CV_REDUPLICATION_TABLE = """\
C:    [ + ] - - - [ + ] - [ + ]
V:    - - [ + ] - - - [ + ] - -
C_u:  - - - - [ + ] - - - [ + ]
V_u:  - - [ + ] - - - [ + ] - -
C_r:  - - - - - - [ + ] - - - -
V_r:  - - - - - - - - [ + ] - -
INS:  [ + ] - - - [ + ] - - - -
DEL:  - - - - [ + ] - - - - - -
RDEL: - - - - - - - - - - [ + ]
RED:  [ + + + + + ] - - - - - -
BASE: - - - - - - [ + + + + + ]
"""

#: A CVCC syllable with its underlying form, as a plain six-tier score
#: (no reduplication bookkeeping).
SYLLABLE_SCORE_TABLE = """\
syll: [ + + + + + + + ]
mora: - - [ + | + + + ]
C:    [ + ] - [ + | + ]
V:    - - [ + ] - - - -
C_u:  - - - - [ + | + ]
V_u:  - - [ + ] - - - -
"""


def total_reduplication_grammar() -> Mcfg:
    return parse_grammar(TOTAL_REDUPLICATION_GRAMMAR)


def final_zero_penalty_automaton() -> WeightedAutomaton:
    return parse_automaton(FINAL_ZERO_PENALTY_AUTOMATON)


def cv_reduplication_table() -> TierTable:
    return parse_tier_table(CV_REDUPLICATION_TABLE)


def syllable_score_table() -> TierTable:
    return parse_tier_table(SYLLABLE_SCORE_TABLE)
