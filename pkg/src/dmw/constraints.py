"""The proof engine: rule-generated constraints over bounded unknowns.

Datasets declare finite domains for their unknowns and a battery of
constraints carrying provenance strings.  ``solve`` reproduces the
parameter determinations: it propagates interval bounds, enumerates when
the survivor set is small, probes per-value feasibility when it is not,
and mines the equalities that hold on every survivor (opposing
inequality pairs, fixed values, and affine relations on small
projections).  Everything is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .chardata import BlockTable, ConstraintSpec
from .decomp import brauer_degrees, pim_coordinates, brauer_expansion
from .paramexpr import ParamExpr

ALL_TIERS = ("proved", "p_gt_5", "conjectural")


@dataclass(frozen=True)
class Constraint:
    """nonneg(expr), plus optionally an opaque full-assignment predicate."""

    expr: ParamExpr | None
    source: str
    opaque: str | None = None  # "degree_positivity"
    q_samples: tuple[int, ...] = ()

    def support(self) -> frozenset[str]:
        return frozenset(self.expr.unknowns()) if self.expr is not None else frozenset()


class SumRuleMismatch(ValueError):
    pass


def sum_rule(p12, p13, p2, p3) -> list[ParamExpr]:
    """chi1 from the projectives chi1+chi2, chi1+chi3 and the known
    indecomposables chi2, chi3; errors when the two differences disagree
    (wrong inputs, not a mathematical failure)."""

    def as_exprs(v):
        return [x if isinstance(x, ParamExpr) else ParamExpr.const(int(x)) for x in v]

    p12, p13, p2, p3 = map(as_exprs, (p12, p13, p2, p3))
    d1 = [a - b for a, b in zip(p12, p2)]
    d2 = [a - b for a, b in zip(p13, p3)]
    if d1 != d2:
        bad = next(i for i, (x, y) in enumerate(zip(d1, d2)) if x != y)
        raise SumRuleMismatch(f"differences disagree at row {bad + 1}: {d1[bad]} vs {d2[bad]}")
    return d1


def dl_constraints(t: BlockTable, virtual_name: str, exempt=frozenset()) -> list[Constraint]:
    """One nonnegativity constraint per non-exempt column: the sign of a
    minimal Deligne-Lusztig multiplicity.  Columns are 1-based."""
    vc = t.virtual_chars[virtual_name]
    coords = pim_coordinates(t, [x * vc.sign for x in vc.entries])
    out = []
    for j in range(t.size):
        if (j + 1) in exempt:
            continue
        out.append(Constraint(coords[j], f"(DL) {virtual_name} column {j + 1}"))
    return out


def expand_constraints(t: BlockTable, tiers=("proved",), entry_nonneg: bool = True) -> list[Constraint]:
    """Runtime constraint battery of a table: the implicit requirement
    that every matrix entry is a decomposition number (nonnegative),
    then the dataset records of the selected tiers."""
    out: list[Constraint] = []
    seen: set[ParamExpr] = set()
    if entry_nonneg:
        for col in t.columns:
            for e in col.entries:
                if not e.is_constant() and e not in seen:
                    seen.add(e)
                    out.append(Constraint(e, "matrix entry"))
    for spec in t.constraints:
        if spec.tier not in tiers:
            continue
        out.extend(_expand_one(t, spec))
    return out


def _expand_one(t: BlockTable, spec: ConstraintSpec) -> list[Constraint]:
    if spec.kind == "nonneg":
        return [Constraint(spec.expr, spec.source)]
    if spec.kind == "at_least":
        return [Constraint(spec.expr - ParamExpr.const(spec.k), spec.source)]
    if spec.kind == "equal_zero":
        return [Constraint(spec.expr, spec.source), Constraint(-spec.expr, spec.source)]
    if spec.kind == "sign_of_pim_coords":
        vc = t.virtual_chars[spec.virtual]
        coords = pim_coordinates(t, [x * vc.sign for x in vc.entries])
        cols = spec.columns or tuple(range(1, t.size + 1))
        return [Constraint(coords[j - 1], f"{spec.source} [column {j}]") for j in cols]
    if spec.kind == "brauer_nonneg":
        vc = t.virtual_chars[spec.virtual]
        mults = brauer_expansion(t, [x * vc.sign for x in vc.entries])
        cols = spec.columns or tuple(range(1, t.size + 1))
        return [Constraint(mults[j - 1], f"{spec.source} [column {j}]") for j in cols]
    if spec.kind == "degree_positivity":
        return [Constraint(None, spec.source, opaque="degree_positivity", q_samples=spec.q_samples)]
    raise ValueError(f"unknown constraint kind {spec.kind!r}")


def _interval_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    vals = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(vals), max(vals))


def _expr_interval(e: ParamExpr, box: dict[str, tuple[int, int]]) -> tuple[int, int]:
    lo = hi = 0
    for mono, c in e.terms:
        iv = (c, c)
        for name in mono:
            iv = _interval_mul(iv, box[name])
        lo += iv[0]
        hi += iv[1]
    return (lo, hi)


class _Budget:
    __slots__ = ("nodes",)

    def __init__(self, nodes: int):
        self.nodes = nodes


class _Search:
    """Backtracking enumeration over interval domains.

    Linear constraints propagate as interval bounds; nonlinear ones prune
    through interval arithmetic and are checked exactly on full
    assignments.  A node budget keeps every query terminating quickly;
    queries that would exceed it report so instead of silently degrading.
    """

    def __init__(self, t: BlockTable, constraints: list[Constraint]):
        self.table = t
        self.names = sorted(t.params)
        self.domains = {n: t.params[n] for n in self.names}
        self.constraints = [c for c in constraints if c.expr is not None]
        self.opaque = [c for c in constraints if c.expr is None]

    @staticmethod
    def _linear_form(e: ParamExpr):
        coeffs: dict[str, int] = {}
        const = 0
        for mono, k in e.terms:
            if mono == ():
                const = k
            else:
                coeffs[mono[0]] = coeffs.get(mono[0], 0) + k
        return coeffs, const

    # -- propagation ---------------------------------------------------
    def propagate(self, box, active: list[ParamExpr]) -> bool:
        """Interval propagation of nonneg(e) for e in active; linear parts
        tighten bounds, nonlinear parts prune via interval arithmetic."""
        linear = []
        nonlinear = []
        for e in active:
            if e.is_linear():
                linear.append(self._linear_form(e))
            else:
                nonlinear.append(e)
        dirty = True
        while dirty:
            dirty = False
            for coeffs, const in linear:
                hi_total = const
                for n, k in coeffs.items():
                    lo, hi = box[n]
                    hi_total += k * (hi if k > 0 else lo)
                if hi_total < 0:
                    return False
                for n, k in coeffs.items():
                    lo, hi = box[n]
                    if lo == hi:
                        continue
                    rest = const
                    for m, km in coeffs.items():
                        if m == n:
                            continue
                        mlo, mhi = box[m]
                        rest += km * (mhi if km > 0 else mlo)
                    if k > 0:
                        new_lo = -(rest // k)  # ceil(-rest/k)
                        if new_lo > lo:
                            if new_lo > hi:
                                return False
                            box[n] = (new_lo, hi)
                            dirty = True
                    else:
                        new_hi = rest // (-k)  # floor(rest/-k)
                        if new_hi < hi:
                            if new_hi < lo:
                                return False
                            box[n] = (lo, new_hi)
                            dirty = True
        for e in nonlinear:
            if _expr_interval(e, box)[1] < 0:
                return False
        return True

    def _check_full(self, assignment: dict[str, int]) -> bool:
        for c in self.constraints:
            if c.expr.eval(assignment) < 0:
                return False
        for c in self.opaque:
            degs = brauer_degrees(self.table, assignment)
            if not all(d.eval(q0) > 0 for d in degs for q0 in c.q_samples):
                return False
        return True

    # -- search --------------------------------------------------------
    def _dfs(self, box, active, collect, limit: int, budget: _Budget) -> int:
        budget.nodes -= 1
        if budget.nodes < 0:
            raise SearchSpaceExceeded("solver node budget exhausted")
        if not self.propagate(box, active):
            return 0
        free = [n for n in self.names if box[n][0] < box[n][1]]
        if not free:
            assignment = {n: box[n][0] for n in self.names}
            if self._check_full(assignment):
                if collect is not None:
                    collect.append(assignment)
                return 1
            return 0
        pivot = min(free, key=lambda n: (box[n][1] - box[n][0], n))
        found = 0
        for v in range(box[pivot][0], box[pivot][1] + 1):
            sub_active = self._pin(active, pivot, v)
            if sub_active is None:
                continue
            sub = dict(box)
            sub[pivot] = (v, v)
            found += self._dfs(sub, sub_active, collect, limit - found, budget)
            if found >= limit:
                break
        return found

    @staticmethod
    def _pin(active: list[ParamExpr], name: str, value: int):
        """Substitute name := value; None when a constraint fails outright."""
        out = []
        for e in active:
            if name in e.unknowns():
                e = e.substitute({name: value})
                if e.is_constant():
                    if e.constant_value() < 0:
                        return None
                    continue
            out.append(e)
        return out

    def _initial_state(self, pinned: dict[str, int] | None = None):
        box = dict(self.domains)
        active = [c.expr for c in self.constraints]
        for n, v in (pinned or {}).items():
            lo, hi = box[n]
            if not lo <= v <= hi:
                return None
            box[n] = (v, v)
            active = self._pin(active, n, v)
            if active is None:
                return None
        return box, active

    def exists(self, pinned: dict[str, int] | None = None, nodes: int = 500_000) -> bool:
        state = self._initial_state(pinned)
        if state is None:
            return False
        box, active = state
        return self._dfs(box, active, None, 1, _Budget(nodes)) >= 1

    def enumerate_upto(self, cap: int, nodes: int = 500_000) -> list[dict[str, int]] | None:
        collect: list[dict[str, int]] = []
        state = self._initial_state()
        if state is None:
            return []
        try:
            found = self._dfs(*state, collect, cap + 1, _Budget(nodes))
        except SearchSpaceExceeded:
            return None
        if found > cap:
            return None
        collect.sort(key=lambda a: tuple(a[n] for n in self.names))
        return collect


@dataclass
class SolveResult:
    unknowns: list[str]
    survivors: list[dict[str, int]] | None  # explicit when small
    ranges: dict[str, list[int]]  # feasible values (endpoints only for wide domains)
    wide: set[str]  # unknowns whose range was probed only from the ends
    equalities: list[tuple[str, ParamExpr]]  # canonical var = expr
    empty: bool = False
    first_blockers: dict[str, str] = field(default_factory=dict)

    def range_text(self, name: str) -> str:
        vals = self.ranges[name]
        if name in self.wide:
            return f"{vals[0]}..{vals[-1]}"
        if len(vals) <= 8:
            return "{" + ",".join(map(str, vals)) + "}"
        if vals == list(range(vals[0], vals[-1] + 1)):
            return f"{vals[0]}..{vals[-1]}"
        return "{" + ",".join(map(str, vals)) + "}"

    def lines(self) -> list[str]:
        out = []
        if self.empty:
            out.append("survivors: none")
            for name in sorted(self.first_blockers):
                out.append(f"blocked: {name} by {self.first_blockers[name]}")
            return out
        if self.survivors is not None:
            out.append(f"survivors: {len(self.survivors)}")
            if len(self.survivors) <= 50:
                for s in self.survivors:
                    out.append("  " + " ".join(f"{n}={s[n]}" for n in self.unknowns))
        else:
            out.append("survivors: large (ranges probed)")
        fixed = {n for n, _ in self.equalities}
        for n, e in self.equalities:
            out.append(f"eq: {n} = {e}")
        for n in self.unknowns:
            if n not in fixed:
                out.append(f"dom: {n} in {self.range_text(n)}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines())


_ENUM_CAP = 20_000
_WIDE_DOMAIN = 65
_PROJECTION_CAP = 4096


def solve(t: BlockTable, tiers=("proved",), extra: list[Constraint] | None = None) -> SolveResult:
    """Exhaustive, deterministic solve of the table's constraint battery
    over the declared domains."""
    constraints = expand_constraints(t, tiers) + list(extra or [])
    search = _Search(t, constraints)
    names = search.names
    if not names:
        return SolveResult([], [{}], {}, set(), [])

    survivors = search.enumerate_upto(_ENUM_CAP)
    if survivors is not None and not survivors:
        blockers = _blocking_constraints(t, constraints)
        return SolveResult(names, None, {n: [] for n in names}, set(), [],
                           empty=True, first_blockers=blockers)

    ranges: dict[str, list[int]] = {}
    wide: set[str] = set()
    if survivors is not None:
        for n in names:
            ranges[n] = sorted({s[n] for s in survivors})
    else:
        for n in names:
            lo, hi = search.domains[n]
            if hi - lo + 1 <= _WIDE_DOMAIN:
                ranges[n] = [v for v in range(lo, hi + 1) if search.exists({n: v})]
            else:
                fmin = next((v for v in range(lo, hi + 1) if search.exists({n: v})), None)
                fmax = next((v for v in range(hi, lo - 1, -1) if search.exists({n: v})), None)
                assert fmin is not None and fmax is not None
                ranges[n] = list(range(fmin, fmax + 1))
                wide.add(n)

    equalities = _mine_equalities(search, constraints, survivors, ranges, wide)
    return SolveResult(names, survivors, ranges, wide, equalities)


def _blocking_constraints(t: BlockTable, constraints: list[Constraint]) -> dict[str, str]:
    """For an inconsistent battery, the constraints whose individual
    removal restores feasibility (the eliminating constraints)."""
    out: dict[str, str] = {}
    for skip in range(len(constraints)):
        rest = constraints[:skip] + constraints[skip + 1 :]
        if _Search(t, rest).exists():
            c = constraints[skip]
            label = str(c.expr) if c.expr is not None else (c.opaque or "opaque")
            out[label] = c.source
    return out


def _mine_equalities(search, constraints, survivors, ranges, wide) -> list[tuple[str, ParamExpr]]:
    names = search.names
    eqs: dict[str, ParamExpr] = {}

    def offer(var: str, rhs: ParamExpr):
        if var not in eqs:
            eqs[var] = rhs

    # fixed values
    for n in names:
        if n not in wide and len(ranges[n]) == 1:
            offer(n, ParamExpr.const(ranges[n][0]))

    # opposing inequality pairs give exact affine (or higher) relations
    exprs = {c.expr for c in constraints if c.expr is not None}
    for n in names:
        lo, hi = search.domains[n]
        exprs.add(ParamExpr.var(n) - ParamExpr.const(lo))
        exprs.add(ParamExpr.const(hi) - ParamExpr.var(n))
    for e in sorted(exprs, key=str):
        if e.is_constant() or (-e) not in exprs:
            continue
        solved = _solve_unit_var(e)
        if solved:
            offer(*solved)

    # affine relations on small projections (constraint supports)
    supports = sorted(
        {c.support() for c in constraints if c.expr is not None and 2 <= len(c.support()) <= 4},
        key=lambda s: (len(s), sorted(s)),
    )
    for sup in supports:
        sup = sorted(sup)
        size = 1
        for n in sup:
            lo, hi = search.domains[n]
            size *= hi - lo + 1
        if size > _PROJECTION_CAP:
            continue
        points = _project(search, sup, survivors)
        if len(points) < 2:
            continue
        for var, rhs in _affine_relations(sup, points):
            offer(var, rhs)

    # drop tautologies var = var and canonicalise order
    out = [(n, eqs[n]) for n in sorted(eqs) if eqs[n] != ParamExpr.var(n)]
    return out


def _solve_unit_var(e: ParamExpr):
    """Write e == 0 as var = rhs for the lexicographically last unknown
    appearing linearly with coefficient +-1 in a purely linear way."""
    candidates = []
    for name in sorted(e.unknowns()):
        coeff = e.coefficient(name)
        if not coeff.is_constant() or abs(coeff.constant_value()) != 1:
            continue
        if any(mono.count(name) > 1 or (name in mono and len(mono) > 1) for mono, _ in e.terms):
            continue
        candidates.append((name, coeff.constant_value()))
    if not candidates:
        return None
    name, c = candidates[-1]
    rest = e - ParamExpr.var(name).scale(c)
    rhs = rest.scale(-c)  # c in {+1,-1}
    return name, rhs


def _project(search: _Search, sup: list[str], survivors) -> list[tuple[int, ...]]:
    if survivors is not None:
        return sorted({tuple(s[n] for n in sup) for s in survivors})
    points = []
    doms = [range(search.domains[n][0], search.domains[n][1] + 1) for n in sup]
    for combo in itertools.product(*doms):
        if search.exists(dict(zip(sup, combo))):
            points.append(combo)
    return points


def _affine_relations(sup: list[str], points: list[tuple[int, ...]]):
    """Affine relations a0 + sum a_i x_i = 0 valid on all points, solved
    for a unit-coefficient variable; exact rational nullspace."""
    k = len(sup)
    rows = [[Fraction(1)] + [Fraction(x) for x in pt] for pt in points]
    # rational row-reduce the transpose-nullspace problem: find v with rows @ v = 0
    # build matrix and compute nullspace of the (points x (k+1)) system
    m = [row[:] for row in rows]
    ncols = k + 1
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fc]
        den = 1
        for x in v:
            den = den * x.denominator // _gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = _gcd(g, abs(x))
        if g:
            ints = [x // g for x in ints]
        e = ParamExpr.const(ints[0])
        for name, coef in zip(sup, ints[1:]):
            e = e + ParamExpr.var(name).scale(coef)
        if e.is_constant():
            continue
        solved = _solve_unit_var(e)
        if solved:
            out.append(solved)
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# (HCr) indecomposability search


class SearchSpaceExceeded(RuntimeError):
    pass


def _levi_coordinates(levi, rvec: list[int]) -> list[Fraction]:
    """Coordinates of a restricted vector on the Levi's PIM basis."""
    n = len(levi.rows)
    cols = [list(p) for p in levi.pims]
    m = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    b = [Fraction(x) for x in rvec]
    # exact Gauss
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError(f"levi {levi.name}: PIM matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        b[c], b[piv] = b[piv], b[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                for cc in range(n):
                    m[r][cc] -= f * m[c][cc]
                b[r] -= f * b[c]
    return [b[c] / m[c][c] for c in range(n)]


def hcr_indecomposable(
    t: BlockTable,
    v,
    assignment: dict[str, int] | None = None,
    cap: int = 1 << 22,
) -> bool:
    """True iff the projective vector v admits no splitting u + (v-u) in
    which both parts decompose nonnegatively on every known PIM basis:
    the block's own columns and each attached Levi (restriction followed
    by the Levi's PIMs).  The search is exhaustive over subvectors; a cap
    guards the exponential blowup and is reported, never silently hit."""
    assignment = dict(assignment or {})
    vec = []
    for x in v:
        e = x if isinstance(x, ParamExpr) else ParamExpr.const(int(x))
        e = e.substitute(assignment)
        if not e.is_constant():
            raise ValueError(f"vector entry {e} still has unknowns")
        vec.append(e.constant_value())
    if any(x < 0 for x in vec) or not any(vec):
        raise ValueError("need a nonzero nonnegative vector")

    count = 1
    for x in vec:
        count *= x + 1
    if count > cap:
        raise SearchSpaceExceeded(f"{count} subvectors exceed the cap {cap}")

    matrix = t.matrix(assignment)

    def self_coords_ok(u: tuple[int, ...]) -> bool:
        coords = []
        for i in range(t.size):
            acc = u[i]
            for j in range(i):
                if matrix[i][j] and coords[j]:
                    acc -= matrix[i][j] * coords[j]
            if acc < 0:
                return False
            coords.append(acc)
        return True

    def levi_ok(u: tuple[int, ...]) -> bool:
        for levi in t.levis:
            rvec = [0] * len(levi.rows)
            for i, mult in enumerate(u):
                if mult:
                    for k, r in enumerate(levi.restriction[i]):
                        rvec[k] += mult * r
            for c in _levi_coordinates(levi, rvec):
                if c < 0:
                    return False
        return True

    passes: dict[tuple[int, ...], bool] = {}

    def ok(u: tuple[int, ...]) -> bool:
        if u not in passes:
            passes[u] = self_coords_ok(u) and levi_ok(u)
        return passes[u]

    ranges = [range(x + 1) for x in vec]
    for u in itertools.product(*ranges):
        if not any(u) or u == tuple(vec):
            continue
        comp = tuple(a - b for a, b in zip(vec, u))
        if u > comp:
            continue  # each split visited once
        if ok(u) and ok(comp):
            return False
    return True
