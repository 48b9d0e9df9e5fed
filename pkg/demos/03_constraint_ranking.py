"""Ranked evaluation: successive winnowing by weighted constraints.

Each round intersects the surviving candidate grammar with one constraint
machine, keeps only the minimum-violation strings, zeroes the weights, and
hands the result to the next rank.  Candidates eliminated by a high rank
never come back, however well they do lower down; that is what makes
constraint ranking lexicographic.
"""

from otearley import (
    ConstraintRanking,
    Transition,
    WeightedAutomaton,
    enumerate_strings,
    evaluate,
    presets,
)

candidates = presets.total_reduplication_grammar()
no_final_zero = presets.final_zero_penalty_automaton()
few_ones = WeightedAutomaton(1, [1], [
    Transition(1, "0", 0, 1),
    Transition(1, "1", 1, 1),   # one violation per 1
])

ranking = ConstraintRanking([no_final_zero, few_ones])
print("Rank 0 penalizes a final 0; rank 1 charges one violation per 1.")
for rank, problem in ranking.problems():
    print(f"  note: constraint {rank} is not a strict machine ({problem})")

survivors = evaluate(candidates, ranking)
print("\nSurvivor grammar:")
print(survivors)

print("Surviving strings up to length 6:")
print("  ", sorted("".join(t) for t in enumerate_strings(survivors, 6)))
print("Every survivor doubles a half of the shape 0...01, which is the")
print("cheapest way to end in 1 while containing as few 1s as possible.")

print("\nSwapping the ranks changes the outcome: minimizing 1s first keeps")
print("only the all-0 forms, and the final-0 penalty then has no choice:")
swapped = evaluate(candidates, ConstraintRanking([few_ones, no_final_zero]))
print("  ", sorted("".join(t) for t in enumerate_strings(swapped, 6)))
