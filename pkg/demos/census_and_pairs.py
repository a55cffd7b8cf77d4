#!/usr/bin/env python3
"""Harish-Chandra series censuses of all shipped blocks, and the pairs of
blocks whose decomposition matrices coincide up to permutation."""

from dmw import chardata, decomp

print("censuses:")
for name in chardata.dataset_names():
    t = chardata.load_dataset(name)
    census = chardata.census_text(chardata.series_census(t))
    print(f"  {name:16} {census}")

print()
print("permutation-identical pairs:")
pairs = [
    ("d6_block1", "d8_block1"),
    ("d6_block3", "d8_block4"),
    ("e6_principal", "e8_block3"),
    ("e7_block2", "e7_block3"),
    ("e7_block1", "e8_block1"),
    ("e7_block4", "e8_block4"),
    ("e8_block1", "e8_block2"),
]
for a, b in pairs:
    w = decomp.permutation_identical(chardata.load_dataset(a), chardata.load_dataset(b))
    print(f"  {a} ~ {b}: {'witness found' if w else 'NONE'}")
