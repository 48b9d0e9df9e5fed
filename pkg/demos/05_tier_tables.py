"""Tier tables and input machines.

Gestural scores flatten column by column into plain strings, one symbol per
tier per time slice, so a straight-line automaton over the flattening can
stand in for a fully specified input.  Restricting a candidate grammar to
an input is the same weighted intersection with all weights zero.
"""

from otearley import (
    decode_table,
    encode_table,
    enumerate_strings,
    from_tier_table,
    intersect_input,
    presets,
)

table = presets.syllable_score_table()
print("A six-tier syllable score:")
print(table)

flat = encode_table(table)
print(f"Flattened ({len(table.tier_names)} tiers x {len(table.slices)} "
      f"slices = {len(flat)} symbols):")
print("  ", flat)
print("Round trip recovers the table:",
      decode_table(flat, table.tier_names) == table)

machine = from_tier_table(table)
print(f"\nAs an input machine: {len(machine.transitions)} edges in a chain, "
      "accepting exactly the flattening.")

print("\nRestricting the total-reduplication grammar to one input string:")
ww = presets.total_reduplication_grammar()
from otearley import chain_automaton
pinned = intersect_input(ww, chain_automaton("0101"))
print(pinned)
print("Its language:",
      sorted("".join(t) for t in enumerate_strings(pinned, 6)))

print("An input no candidate matches leaves the explicit empty grammar:")
print(intersect_input(ww, chain_automaton("010")))
