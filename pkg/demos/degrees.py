#!/usr/bin/env python3
"""Walk through the exact-degree machinery on the rank-4 orthogonal group.

Every unipotent character degree lives in factored form
scalar * q^k * prod Phi_d, and the symbol formula reproduces the shipped
table bit for bit.
"""

from dmw import chardata, symbols

t = chardata.load_dataset("d4_principal")
print(f"{t.group.label}, block {t.block}, |G| = {t.group.order}")
print(f"Sylow Phi4 rank {t.group.sylow_phi4}, block defect {chardata.block_defect(t)}")
print()
print(f"{'label':>8}  {'a':>2}  degree")
for i, row in enumerate(t.rows):
    recomputed = chardata.recompute_degree(t, i)
    marker = "" if recomputed is None else ("  (recomputed)" if recomputed == row.degree else "  MISMATCH")
    print(f"{row.name:>8}  {row.a_value:>2}  {row.degree}{marker}")

print()
print("evaluations of the degree of 1.21 at small prime powers:")
deg = symbols.generic_degree(symbols.parse_label("1.21", "D", 4))
for q0 in (2, 3, 4, 5):
    print(f"  q={q0}: {deg.eval(q0)}")
