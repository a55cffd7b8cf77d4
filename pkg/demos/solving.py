#!/usr/bin/env python3
"""Reproduce the parameter determinations: each block dataset carries its
constraint battery (non-negativity of Deligne-Lusztig multiplicities,
reductions of non-unipotent characters, Brauer-degree positivity), and the
bounded-domain solver recovers the published relations."""

from dmw import chardata, constraints

for name, tiers in [
    ("d4_principal", ("proved",)),
    ("d7_block2", ("proved",)),
    ("f4_principal", ("proved",)),
    ("2e6_principal", ("proved",)),
    ("d7_principal", ("proved", "conjectural")),
]:
    table = chardata.load_dataset(name)
    result = constraints.solve(table, tiers)
    print(f"=== {name} (tiers {'+'.join(tiers)})")
    for line in result.lines():
        print("   ", line)
    print()
