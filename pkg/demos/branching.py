#!/usr/bin/env python3
"""One-box Harish-Chandra branching along the corank-one chain, with the
degree-sum consistency check through group orders."""

from collections import Counter

from dmw import symbols

for label in (".3", "1.2", "2+"):
    bp = symbols.parse_label(label, "D", None)
    up = Counter(str(y) for y in symbols.induce_one_box(bp))
    print(f"induce {label:5} ->", "  ".join(f"{k} x{v}" for k, v in sorted(up.items())))

bp = symbols.parse_label("1.21", "D", 4)
down = Counter(str(y) for y in symbols.restrict_one_box(bp))
print("restrict 1.21 ->", "  ".join(f"{k} x{v}" for k, v in sorted(down.items())))

# the induced degrees must sum to the parabolic index times the degree below
q0 = 3
n = 5
b = symbols.parse_label(".31", "D", 4)
lhs = sum(symbols.generic_degree(y).eval(q0) for y in symbols.induce_one_box(b))
index = symbols.group_order("D", n).eval(q0) / (
    symbols.group_order("D", n - 1).eval(q0) * (q0 - 1) * q0 ** (n * (n - 1) - (n - 1) * (n - 2))
)
print(f"degree-sum check at q={q0}: {lhs} == {symbols.generic_degree(b).eval(q0) * index}")
