"""Tuple grammars 101: the total-reduplication language {ww}.

A tuple grammar rewrites a category to several string components at once.
The two components of A below are always built by the same rule choices, so
the first half of the string is forced to equal the second half, which
no plain context-free grammar can do.
"""

from otearley import decompose, enumerate_strings, presets, validate_normal_form

grammar = presets.total_reduplication_grammar()
print("The grammar:")
print(grammar)

print("Normal-form violations:", validate_normal_form(grammar) or "none")

print("\nEvery derivable string up to length 6 (all weight 0):")
for tokens in sorted(enumerate_strings(grammar, 6), key=lambda t: (len(t), t)):
    print("  ", "".join(tokens))

print("\n'010010' splits as 010|010, so it is in the language;")
print("'0100' would need 01 == 00, so it is not:")
found = enumerate_strings(grammar, 6)
print("   010010 derivable?", tuple("010010") in found)
print("   0100   derivable?", tuple("0100") in found)

print("\nChart construction works on one component at a time; the split")
print("grammar tags every part with the rule it came from:")
for rule in decompose(grammar).rules:
    rhs = " ".join(str(x) for x in rule.rhs)
    print(f"   rule {rule.origin}: {rule.lhs} -> {rhs}  @{rule.weight}")
