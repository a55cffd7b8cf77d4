"""Cross-dataset consistency through Harish-Chandra induction.

Inducing a projective column one rank up (one-box branching on every row,
cuspidal-series rows branching through their relative labels) yields a
projective character, so its block cuts must decompose non-negatively on
the shipped PIM columns.  The same holds for restriction one rank down.
This couples the independently transcribed tables of consecutive ranks,
so a wrong entry in either table or a wrong branching rule surfaces as a
negative coordinate.
"""

from fractions import Fraction


from dmw.chardata import load_dataset
from dmw.symbols import (
    Bipartition,
    _parse_parts,
    induce_one_box,
    parse_label,
    restrict_one_box,
)

PREFIX_OF_FAMILY = {"D": "D4:", "BC": "C2:"}
CUSPIDAL_RANK = {"D": 4, "BC": 2}


def split_series_label(name, family, rank):
    """Relative bipartition of a cuspidal-series label; groups whose
    relative group has rank one print its labels as partitions of 2."""
    prefix = PREFIX_OF_FAMILY[family]
    body = name[len(prefix):]
    if rank - CUSPIDAL_RANK[family] == 1:
        body = {"2": "1.", "1^2": ".1"}[body]
    if "." not in body:
        body += "."
    a_txt, b_txt = body.split(".")
    alpha = _parse_parts(a_txt) if a_txt else ()
    beta = _parse_parts(b_txt) if b_txt else ()
    return Bipartition.make(alpha, beta, "BC")


def series_label(bp, family, rank):
    """Dataset name of a cuspidal-series label at the given group rank."""
    prefix = PREFIX_OF_FAMILY[family]
    if rank - CUSPIDAL_RANK[family] == 1:
        return prefix + {((1,), ()): "2", ((), (1,)): "1^2"}[(bp.alpha, bp.beta)]
    return prefix + bp.label()


def branch_row(name, family, rank, up):
    """Multiset of target-rank row names for one source row."""
    prefix = PREFIX_OF_FAMILY[family]
    if name == "D4" or name == prefix:  # a cuspidal character itself
        if not up:
            return []
        empty = Bipartition.make((), (), "BC")
        return [series_label(y, family, rank + 1) for y in induce_one_box(empty)]
    if name.startswith(prefix):
        bp = split_series_label(name, family, rank)
        moved = induce_one_box(bp) if up else (restrict_one_box(bp) if bp.rank else [])
        return [series_label(y, family, rank + 1 if up else rank - 1) for y in moved]
    bp = parse_label(name, family, rank)
    moved = induce_one_box(bp) if up else restrict_one_box(bp)
    return [y.label() for y in moved]


def canonical(name, family, rank):
    """Label in a fixed style (the tables mix digit runs and exponents)."""
    prefix = PREFIX_OF_FAMILY[family]
    if name == "D4" or name == prefix:
        return name
    if name.startswith(prefix):
        return series_label(split_series_label(name, family, rank), family, rank)
    return parse_label(name, family, rank).label()


def branched_column(src, j, rank, up):
    """Induce/restrict column j of a table; canonical row-name -> mult."""
    out = {}
    family = src.group.family
    for i, row in enumerate(src.rows):
        coeff = src.entry(i, j).substitute(dict(src.published))
        c = coeff.constant_value()
        if not c:
            continue
        for target in branch_row(row.name, family, rank, up):
            out[target] = out.get(target, 0) + c
    return out


def cut_coordinates(table, vector):
    """Coordinates of the block cut of a projective on the table's PIMs;
    exact elimination (chain columns are not diagonal-aligned)."""
    n = table.size
    matrix = table.matrix(dict(table.published))
    m = [[Fraction(matrix[i][j]) for j in range(n)] for i in range(n)]
    b = [Fraction(vector.get(canonical(r.name, table.group.family, table.group.rank), 0))
         for r in table.rows]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        b[c], b[piv] = b[piv], b[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                for cc in range(c, n):
                    m[r][cc] -= f * m[c][cc]
                b[r] -= f * b[c]
    return [b[c] / m[c][c] for c in range(n)]


# Unknowns with a published determination; columns touching any other
# unknown (the open multiplicities of the cuspidal projectives, which the
# tables leave undetermined) are outside the scope of this check.
RESOLVED = {"a", "c2", "c3", "c4", "a3", "a5"}


def resolved_columns(t):
    for j in range(t.size):
        unknowns = set()
        for i in range(t.size):
            unknowns |= t.entry(i, j).unknowns()
        if unknowns <= RESOLVED:
            yield j


D6_BLOCKS = ["d6_block1", "d6_block2", "d6_block3"]
D8_BLOCKS = ["d8_block1", "d8_block2", "d8_block3", "d8_block4"]
C4_BLOCKS = ["c4_principal", "c4_block2", "c4_block3"]

EDGES = [
    ("d4_principal", 4, ["d5_principal", "d5_block2"]),
    ("d5_principal", 5, D6_BLOCKS),
    ("d5_block2", 5, D6_BLOCKS),
    ("d6_block1", 6, ["d7_principal", "d7_block2"]),
    ("d6_block2", 6, ["d7_principal", "d7_block2"]),
    ("d6_block3", 6, ["d7_principal", "d7_block2"]),
    ("d7_principal", 7, D8_BLOCKS),
    ("d7_block2", 7, D8_BLOCKS),
    ("c2_principal", 2, ["c3_block1", "c3_block2"]),
    ("c3_block1", 3, C4_BLOCKS),
    ("c3_block2", 3, C4_BLOCKS),
]


def test_induced_projectives_decompose_nonnegatively():
    checked = 0
    for src_name, rank, targets in EDGES:
        src = load_dataset(src_name)
        tables = [load_dataset(t) for t in targets]
        for j in resolved_columns(src):
            vector = branched_column(src, j, rank, up=True)
            for table in tables:
                coords = cut_coordinates(table, vector)
                assert all(c >= 0 for c in coords), (src_name, j + 1, table.name, coords)
                checked += sum(1 for c in coords if c)
    assert checked > 200


def test_restricted_projectives_decompose_nonnegatively():
    down = [
        ("d5_principal", 5, ["d4_principal"]),
        ("d5_block2", 5, ["d4_principal"]),
        ("d6_block1", 6, ["d5_principal", "d5_block2"]),
        ("d6_block2", 6, ["d5_principal", "d5_block2"]),
        ("d6_block3", 6, ["d5_principal", "d5_block2"]),
        ("d7_principal", 7, D6_BLOCKS),
        ("d7_block2", 7, D6_BLOCKS),
        ("c3_block1", 3, ["c2_principal"]),
        ("c3_block2", 3, ["c2_principal"]),
        ("c4_principal", 4, ["c3_block1", "c3_block2"]),
        ("c4_block2", 4, ["c3_block1", "c3_block2"]),
        ("c4_block3", 4, ["c3_block1", "c3_block2"]),
    ]
    for src_name, rank, targets in down:
        src = load_dataset(src_name)
        tables = [load_dataset(t) for t in targets]
        for j in resolved_columns(src):
            vector = branched_column(src, j, rank, up=False)
            for table in tables:
                coords = cut_coordinates(table, vector)
                assert all(c >= 0 for c in coords), (src_name, j + 1, table.name, coords)
