"""Decomposition-matrix algebra.

Unitriangular solving over expression entries, Brauer-character degrees
through the inverse matrix, coordinates of virtual characters on the PIM
basis, and permutation-identity of blocks.  Reports use the stable
line format ``CHECK <name> PASS|FAIL <detail>`` so they can be frozen in
golden tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .chardata import BlockTable
from .paramexpr import ParamExpr
from .qpoly import DensePoly


@dataclass
class Report:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        return [
            f"CHECK {name} {'PASS' if ok else 'FAIL'}{' ' + detail if detail else ''}"
            for name, ok, detail in self.checks
        ]

    def text(self) -> str:
        return "\n".join(self.lines())


def check_unitriangular(t: BlockTable, report: Report | None = None) -> Report:
    """Diagonal entries are the constant 1; above-diagonal entries are the
    zero expression, or an expression vanishing at the published
    assignment (those are reported, not failed)."""
    report = report or Report()
    conditional = []
    for j in range(t.size):
        diag = t.entry(j, j)
        if not (diag.is_constant() and diag.constant_value() == 1):
            report.add("unitriangular", False, f"diagonal not 1 at ({j + 1},{j + 1}): {diag}")
            return report
        for i in range(j):
            e = t.entry(i, j)
            if e.is_zero():
                continue
            if e.is_constant():
                report.add("unitriangular", False, f"nonzero above diagonal at ({i + 1},{j + 1}): {e}")
                return report
            value = e.eval({k: t.published.get(k, 0) for k in e.unknowns()})
            if value != 0:
                report.add(
                    "unitriangular",
                    False,
                    f"above-diagonal entry at ({i + 1},{j + 1}) = {e} nonzero at published assignment",
                )
                return report
            conditional.append((i + 1, j + 1, str(e)))
    detail = ""
    if conditional:
        spots = " ".join(f"({i},{j})={e}" for i, j, e in conditional)
        detail = f"above-diagonal expressions vanish at published assignment: {spots}"
    report.add("unitriangular", True, detail)
    return report


def _strictly_lower(t: BlockTable) -> bool:
    return all(t.entry(i, j).is_zero() for j in range(t.size) for i in range(j))


def pim_coordinates(t: BlockTable, v) -> list[ParamExpr]:
    """The unique m with D*m = v, by forward substitution over expression
    arithmetic.  Requires the stored matrix to be strictly unitriangular
    (true for every dataset except where an above-diagonal expression is
    pending; assign its unknowns first in that case)."""
    if not _strictly_lower(t):
        raise ValueError(f"{t.name}: matrix has above-diagonal expressions; fix an assignment first")
    vec = [x if isinstance(x, ParamExpr) else ParamExpr.const(int(x)) for x in v]
    if len(vec) != t.size:
        raise ValueError(f"vector length {len(vec)} != {t.size}")
    coords: list[ParamExpr] = []
    for i in range(t.size):
        acc = vec[i]
        for j in range(i):
            e = t.entry(i, j)
            if not e.is_zero() and not coords[j].is_zero():
                acc = acc - e * coords[j]
        coords.append(acc)
    return coords


def brauer_expansion(t: BlockTable, v) -> list[ParamExpr]:
    """D^T v: multiplicity of each Brauer character in a virtual character
    known on the unipotent basic set."""
    vec = [x if isinstance(x, ParamExpr) else ParamExpr.const(int(x)) for x in v]
    if len(vec) != t.size:
        raise ValueError(f"vector length {len(vec)} != {t.size}")
    out = []
    for j in range(t.size):
        acc = ParamExpr.const(0)
        for i in range(t.size):
            e = t.entry(i, j)
            if not e.is_zero() and not vec[i].is_zero():
                acc = acc + e * vec[i]
        out.append(acc)
    return out


def _solve_int_system(matrix: list[list[int]], rhs: list[DensePoly]) -> list[DensePoly]:
    """Solve M x = rhs exactly for an invertible integer matrix, with
    polynomial right-hand sides."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    x = list(rhs)
    # forward elimination with partial pivot (exact)
    perm = list(range(n))
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        x[col], x[piv] = x[piv], x[col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f == 0:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
            x[r] = x[r] - x[col].scale(f)
    # back substitution
    out: list[DensePoly] = [DensePoly.zero()] * n
    for r in range(n - 1, -1, -1):
        acc = x[r]
        for c in range(r + 1, n):
            if m[r][c] != 0:
                acc = acc - out[c].scale(m[r][c])
        out[r] = acc.scale(Fraction(1, 1) / m[r][r])
    return out


def brauer_degrees(t: BlockTable, assignment: dict[str, int] | None = None) -> list[DensePoly]:
    """Generic degrees of the Brauer characters: the solution x of
    D x = deg, i.e. the inverse decomposition matrix applied to the column
    of character degrees.  Exact dense polynomials (differences need not
    refactor)."""
    if any(r.degree is None for r in t.rows):
        raise ValueError(f"{t.name}: degrees are not available for every row")
    matrix = t.matrix(assignment)
    rhs = [r.degree.expand() for r in t.rows]
    return _solve_int_system(matrix, rhs)


def assignments_product(t: BlockTable, cap: int = 200_000):
    """All assignments in the declared domain product (deterministic order)."""
    names = sorted(t.params)
    total = 1
    for n in names:
        lo, hi = t.params[n]
        total *= hi - lo + 1
        if total > cap:
            raise ValueError(f"{t.name}: domain product exceeds {cap}")
    for values in itertools.product(*[range(t.params[n][0], t.params[n][1] + 1) for n in names]):
        yield dict(zip(names, values))


def positivity_domain(t: BlockTable, q_samples=(2, 3, 5, 7, 8, 9)) -> list[dict[str, int]]:
    """Assignments in the domain product under which every Brauer degree
    evaluates positively at every sample.  An empty result is a finding,
    not an error."""
    out = []
    for assignment in assignments_product(t):
        degs = brauer_degrees(t, assignment)
        if all(d.eval(q0) > 0 for d in degs for q0 in q_samples):
            out.append(assignment)
    return out


def brauer_positivity_report(t: BlockTable, assignment, q_samples=(2, 3, 5, 7, 8, 9)) -> Report:
    report = Report()
    degs = brauer_degrees(t, assignment)
    bad_samples = [
        (j + 1, q0) for j, d in enumerate(degs) for q0 in q_samples if d.eval(q0) <= 0
    ]
    report.add(
        "brauer_positive_at_samples",
        not bad_samples,
        "" if not bad_samples else "nonpositive at " + " ".join(f"x{j}(q={q0})" for j, q0 in bad_samples),
    )
    bad_leading = [j + 1 for j, d in enumerate(degs) if d.is_zero() or d.leading() <= 0]
    report.add(
        "brauer_leading_positive",
        not bad_leading,
        "" if not bad_leading else "nonpositive leading coefficient at " + " ".join(map(str, bad_leading)),
    )
    return report


def _column_signature(t: BlockTable, j: int) -> tuple:
    entries = sorted(str(t.entry(i, j)) for i in range(t.size))
    return (t.columns[j].series, tuple(entries))


def permutation_identical(
    t1: BlockTable, t2: BlockTable
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A pair (row permutation, column permutation) making entries and
    column series labels coincide: entry2[rp[i]][cp[j]] == entry1[i][j].
    Backtracking over rows, pruning through column multiset signatures;
    ties resolved by index order, so any witness returned is
    deterministic.  None when sizes or signatures rule a witness out."""
    n = t1.size
    if n != t2.size:
        return None
    if sorted(_column_signature(t1, j) for j in range(n)) != sorted(
        _column_signature(t2, j) for j in range(n)
    ):
        return None

    e1 = [[str(t1.entry(i, j)) for j in range(n)] for i in range(n)]
    e2 = [[str(t2.entry(i, j)) for j in range(n)] for i in range(n)]
    s1 = [t1.columns[j].series for j in range(n)]
    s2 = [t2.columns[j].series for j in range(n)]

    # candidate columns per column by signature
    col_cands = [
        [k for k in range(n) if s2[k] == s1[j] and _column_signature(t2, k) == _column_signature(t1, j)]
        for j in range(n)
    ]
    if any(not c for c in col_cands):
        return None

    row_multiset1 = [tuple(sorted(e1[i])) for i in range(n)]
    row_multiset2 = [tuple(sorted(e2[i])) for i in range(n)]

    rp: list[int | None] = [None] * n
    used_rows: set[int] = set()

    def feasible_columns(partial_rows: list[tuple[int, int]]) -> list[list[int]]:
        cands = []
        for j in range(n):
            ok = []
            for k in col_cands[j]:
                if all(e2[r2][k] == e1[r1][j] for r1, r2 in partial_rows):
                    ok.append(k)
            cands.append(ok)
        return cands

    def match_columns(cands: list[list[int]]) -> list[int] | None:
        # exact bipartite matching, smallest-first for determinism
        order = sorted(range(n), key=lambda j: (len(cands[j]), j))
        assign: dict[int, int] = {}

        def rec(idx: int) -> bool:
            if idx == len(order):
                return True
            j = order[idx]
            for k in cands[j]:
                if k not in assign.values():
                    assign[j] = k
                    if rec(idx + 1):
                        return True
                    del assign[j]
            return False

        if not rec(0):
            return None
        return [assign[j] for j in range(n)]

    def backtrack(i: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if i == n:
            pairs = [(r1, rp[r1]) for r1 in range(n)]
            cands = feasible_columns(pairs)
            cp = match_columns(cands)
            if cp is None:
                return None
            return tuple(rp), tuple(cp)
        for r2 in range(n):
            if r2 in used_rows or row_multiset2[r2] != row_multiset1[i]:
                continue
            rp[i] = r2
            used_rows.add(r2)
            pairs = [(r1, rp[r1]) for r1 in range(i + 1)]
            cands = feasible_columns(pairs)
            if all(cands[j] for j in range(n)):
                found = backtrack(i + 1)
                if found:
                    return found
            used_rows.discard(r2)
            rp[i] = None
        return None

    witness = backtrack(0)
    if witness is None:
        return None
    rperm, cperm = witness
    for i in range(n):
        for j in range(n):
            assert e2[rperm[i]][cperm[j]] == e1[i][j]
    for j in range(n):
        assert s2[cperm[j]] == s1[j]
    return witness
