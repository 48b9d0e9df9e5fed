"""Weighted intersection, step by step.

We intersect the total-reduplication grammar with a two-state machine that
accepts every nonempty 0/1 string but charges one violation to strings
ending in 0.  Only the cheapest candidates survive: the reduplicated forms
ending in 1.
"""

from otearley import (
    decompose,
    enumerate_strings,
    intersect,
    presets,
    recombine,
    recover,
    strip_decoration,
    success_items,
)

grammar = presets.total_reduplication_grammar()
machine = presets.final_zero_penalty_automaton()
print("Constraint machine (nondeterministic: it guesses the last symbol):")
print(machine)

print("The chart, grouped by right-boundary state; each item records the")
print("origin rule, its minimum weight, and how its cheapest paths arose:")
chart = intersect(decompose(grammar), machine)
print(chart.dump())

print("Success items (completed start items reaching a final state at the")
print("minimum weight):", success_items(chart))

print("\nWalking the histories back from the accepting items emits one")
print("state-decorated production per derivation step:")
productions = recover(chart)
for prod in productions:
    print("  ", prod)

print("\nRecombining same-origin components restores the tuple rules; the")
print("exact reweighting then drops the (0, 0) pairing, which costs one")
print("violation more than the optimum:")
recovered = recombine(productions, grammar, machine, start_spans=[(1, 2)])
print(recovered.grammar)

print("After renaming the decorated categories:")
survivors = strip_decoration(recovered)
print(survivors)

print("Surviving strings up to length 8:")
print("  ", sorted("".join(t) for t in enumerate_strings(survivors, 8)))
