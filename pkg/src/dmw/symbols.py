"""Bipartition and symbol combinatorics for the classical groups.

Everything a classical-type table needs is derived here: the label
grammar (``1^3.21``, ``2+``, ``.1^4``), the two-row symbol attached to a
bipartition, exact generic degrees, a-values, and the one-box
Harish-Chandra branching along the corank-one chain.

Type conventions.  ``D`` bipartitions are unordered pairs (the symbol has
equal row lengths); a degenerate pair (alpha == beta) splits into two
characters tagged ``+`` and ``-``.  ``2D`` and ``BC`` bipartitions are
ordered, with the first component occupying the longer symbol row (two
longer for ``2D``, one for ``BC``).  Characters lying over the cuspidal
character of a smaller group of the same family use the same machinery
with a larger row-length difference: 4 for the rank-4 orthogonal cuspidal
series, 3 for the rank-2 symplectic one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qpoly import CycloPoly

Partition = tuple[int, ...]

BASE_DEFECT = {"D": 0, "2D": 2, "BC": 1}


def _check_partition(p) -> Partition:
    t = tuple(int(x) for x in p)
    if any(x <= 0 for x in t) or any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"not a partition: {p}")
    return t


@dataclass(frozen=True)
class Bipartition:
    """A classical-type character label.

    sign is 0 except for degenerate type-D labels, where it is +1 or -1.
    """

    alpha: Partition
    beta: Partition
    gtype: str
    sign: int = 0

    @staticmethod
    def make(alpha, beta, gtype: str, sign: int = 0) -> "Bipartition":
        if gtype not in BASE_DEFECT:
            raise ValueError(f"unknown type {gtype!r}")
        a, b = _check_partition(alpha), _check_partition(beta)
        if gtype == "D":
            if a == b:
                if sign not in (+1, -1):
                    raise ValueError(f"degenerate type-D label {a}.{b} needs a sign")
            else:
                if sign:
                    raise ValueError("sign tag only allowed on degenerate labels")
                a, b = min(a, b), max(a, b)
        elif sign:
            raise ValueError("sign tag only allowed in type D")
        return Bipartition(a, b, gtype, sign)

    @property
    def rank(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    def is_degenerate(self) -> bool:
        return self.gtype == "D" and self.alpha == self.beta

    def label(self) -> str:
        if self.sign:
            return format_partition(self.alpha) + ("+" if self.sign > 0 else "-")
        return f"{format_partition(self.alpha)}.{format_partition(self.beta)}"

    def __str__(self) -> str:
        return self.label()


def format_partition(p: Partition) -> str:
    out = []
    i = 0
    while i < len(p):
        j = i
        while j < len(p) and p[j] == p[i]:
            j += 1
        out.append(f"{p[i]}^{j - i}" if j - i > 1 else str(p[i]))
        i = j
    return "".join(out)


_LABEL = re.compile(r"^(?P<a>[0-9^]*)\.(?P<b>[0-9^]*)(?P<sign>[+-]?)$")


def _parse_parts(text: str) -> Partition:
    """Digit runs with single-digit parts; ``^`` repeats the previous part
    (exponent is a single digit, ranks here never need more)."""
    parts: list[int] = []
    i = 0
    while i < len(text):
        if not text[i].isdigit():
            raise ValueError(f"bad part at {text!r}[{i}]")
        part = int(text[i])
        i += 1
        mult = 1
        if i < len(text) and text[i] == "^":
            i += 1
            if i >= len(text) or not text[i].isdigit():
                raise ValueError(f"missing exponent in {text!r}")
            mult = int(text[i])
            i += 1
        parts.extend([part] * mult)
    return _check_partition(parts)


def parse_label(text: str, gtype: str, rank: int | None = None) -> Bipartition:
    """Parse dot notation, e.g. ``.31``, ``1^3.21``, ``2+`` (type D).

    rank, when given, is the rank of the group; for type 2D the label
    total is one less than the group rank.
    """
    text = text.strip()
    m = _LABEL.match(text)
    if m is None:
        # degenerate shorthand like "2+" (no dot) means alpha = beta
        m2 = re.match(r"^(?P<a>[0-9^]+)(?P<sign>[+-])$", text)
        if gtype == "D" and m2:
            p = _parse_parts(m2.group("a"))
            bp = Bipartition.make(p, p, "D", +1 if m2.group("sign") == "+" else -1)
        else:
            raise ValueError(f"malformed label {text!r}")
    else:
        alpha = _parse_parts(m.group("a")) if m.group("a") else ()
        beta = _parse_parts(m.group("b")) if m.group("b") else ()
        sign = {"": 0, "+": +1, "-": -1}[m.group("sign")]
        bp = Bipartition.make(alpha, beta, gtype, sign)
    if rank is not None and bp.rank + BASE_DEFECT[gtype] ** 2 // 4 != rank:
        raise ValueError(f"label {text!r} has rank {bp.rank}, expected group rank {rank}")
    return bp


@dataclass(frozen=True)
class Symbol:
    """Two-row beta-set symbol, stored shift-reduced."""

    top: tuple[int, ...]  # longer (or equal) row, sorted increasing
    bot: tuple[int, ...]

    @staticmethod
    def make(top, bot) -> "Symbol":
        t, b = sorted(top), sorted(bot)
        while t and b and t[0] == 0 and b[0] == 0:
            t = [x - 1 for x in t[1:]]
            b = [x - 1 for x in b[1:]]
        return Symbol(tuple(t), tuple(b))

    @property
    def defect(self) -> int:
        return len(self.top) - len(self.bot)

    @property
    def rank(self) -> int:
        z = len(self.top) + len(self.bot)
        return sum(self.top) + sum(self.bot) - (z - 1) ** 2 // 4


def beta_set(p: Partition, length: int) -> tuple[int, ...]:
    if length < len(p):
        raise ValueError(f"cannot fit {p} into {length} beta-set entries")
    padded = [0] * (length - len(p)) + sorted(p)
    return tuple(x + i for i, x in enumerate(padded))


def pair_to_symbol(alpha: Partition, beta: Partition, defect: int) -> Symbol:
    """Symbol with the first component in the longer row."""
    mbot = max(len(beta), len(alpha) - defect, 0)
    return Symbol.make(beta_set(alpha, mbot + defect), beta_set(beta, mbot))


def to_symbol(bp: Bipartition, extra_defect: int = 0) -> Symbol:
    """Symbol of a label; extra_defect adds to the row-length difference
    for cuspidal-series labels (4 in type D, 2 more in type BC)."""
    return pair_to_symbol(bp.alpha, bp.beta, BASE_DEFECT[bp.gtype] + extra_defect)


@lru_cache(maxsize=None)
def _divisors(k: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, k + 1) if k % d == 0)


class _Factored:
    """Product accumulator over {2-power, q-power, cyclotomic exponents}."""

    def __init__(self):
        self.scalar = Fraction(1)
        self.qexp = 0
        self.phi: dict[int, int] = {}

    def mul_qminus(self, k: int, e: int = 1):
        # q^k - 1
        for d in _divisors(k):
            self.phi[d] = self.phi.get(d, 0) + e

    def mul_qplus(self, k: int, e: int = 1):
        # q^k + 1 = (q^2k - 1)/(q^k - 1)
        for d in _divisors(2 * k):
            if k % d != 0:
                self.phi[d] = self.phi.get(d, 0) + e

    def value(self) -> CycloPoly:
        factors = []
        for d, e in sorted(self.phi.items()):
            if e < 0:
                raise ArithmeticError(f"negative Phi_{d} exponent {e}")
            if e:
                factors.append((d, e))
        if self.qexp < 0:
            raise ArithmeticError(f"negative q exponent {self.qexp}")
        return CycloPoly.make(self.scalar, self.qexp, factors)


def _torus_part(acc: _Factored, gtype: str, n: int, e: int):
    if gtype == "BC":
        for i in range(1, n + 1):
            acc.mul_qminus(2 * i, e)
    elif gtype == "D":
        acc.mul_qminus(n, e)
        for i in range(1, n):
            acc.mul_qminus(2 * i, e)
    elif gtype == "2D":
        acc.mul_qplus(n, e)
        for i in range(1, n):
            acc.mul_qminus(2 * i, e)
    else:
        raise ValueError(gtype)


def group_order(gtype: str, n: int) -> CycloPoly:
    """|G(q)| for the classical group of the given type and rank."""
    acc = _Factored()
    acc.qexp = n * n if gtype == "BC" else n * (n - 1)
    _torus_part(acc, gtype, n, +1)
    return acc.value()


def symbol_degree(gtype: str, sym: Symbol) -> CycloPoly:
    """Exact generic degree of the unipotent character with this symbol.

    One closed product formula, uniform in the defect, so it covers the
    principal-type labels, cuspidal characters and the cuspidal-series
    labels alike.  A degenerate defect-0 symbol yields the value shared by
    the two split characters before halving; callers halve.
    """
    n = sym.rank
    S, T = sym.top, sym.bot
    z = len(S) + len(T)
    acc = _Factored()
    _torus_part(acc, gtype, n, +1)
    for row in (S, T):
        for i, x in enumerate(row):
            for y in row[i + 1 :]:
                # (q^y - q^x), x < y
                acc.qexp += x
                acc.mul_qminus(y - x)
    for x in S:
        for y in T:
            if x == y:
                acc.scalar *= 2
                acc.qexp += x
            else:
                acc.qexp += min(x, y)
                acc.mul_qplus(abs(x - y))
    # denominator
    acc.scalar /= 2 ** ((z - 1) // 2)
    k = z - 2
    while k >= 2:
        acc.qexp -= k * (k - 1) // 2
        k -= 2
    for row in (S, T):
        for x in row:
            for h in range(1, x + 1):
                acc.mul_qminus(2 * h, -1)
    return acc.value()


def generic_degree(bp: Bipartition) -> CycloPoly:
    """Generic degree of a plain (non cuspidal-series) label.  Both signed
    characters of a degenerate label receive the same degree."""
    deg = symbol_degree(bp.gtype, to_symbol(bp))
    if bp.gtype == "D" and bp.alpha == bp.beta:
        deg = deg.scale(Fraction(1, 2))
    return deg


def series_degree(gtype: str, alpha, beta, extra_defect: int) -> CycloPoly:
    """Generic degree of a cuspidal-series label, given as an ordered pair
    of partitions; extra_defect is 4 for the rank-4 orthogonal series and
    2 for the rank-2 symplectic one."""
    a, b = _check_partition(alpha), _check_partition(beta)
    sym = pair_to_symbol(a, b, BASE_DEFECT[gtype] + extra_defect)
    return symbol_degree(gtype, sym)


def a_value(bp: Bipartition) -> int:
    """Order of vanishing of the generic degree at q = 0."""
    return generic_degree(bp).valuation_q()


def _addable(p: Partition):
    for i in range(len(p)):
        if i == 0 or p[i - 1] > p[i]:
            yield tuple(p[:i] + (p[i] + 1,) + p[i + 1 :])
    yield tuple(p + (1,))


def _removable(p: Partition):
    for i in range(len(p)):
        if i == len(p) - 1 or p[i] > p[i + 1]:
            q = p[:i] + ((p[i] - 1,) if p[i] > 1 else ()) + p[i + 1 :]
            yield tuple(q)


def _one_box(bp: Bipartition, move) -> list[Bipartition]:
    """Shared induce/restrict skeleton; returns one output per box, with
    degenerate outputs split into both signed characters."""
    out: list[Bipartition] = []

    def emit(a, b):
        if bp.gtype == "D" and tuple(a) == tuple(b):
            out.append(Bipartition.make(a, b, "D", +1))
            out.append(Bipartition.make(a, b, "D", -1))
        else:
            out.append(Bipartition.make(a, b, bp.gtype))

    if bp.is_degenerate():
        # a signed character moves a box in a single component
        for b in move(bp.beta):
            emit(bp.alpha, b)
    else:
        for a in move(bp.alpha):
            emit(a, bp.beta)
        for b in move(bp.beta):
            emit(bp.alpha, b)
    return out


def induce_one_box(bp: Bipartition) -> list[Bipartition]:
    """Harish-Chandra induction along the corank-one chain, as a multiset
    (list with multiplicities) of labels one rank up."""
    return _one_box(bp, _addable)


def restrict_one_box(bp: Bipartition) -> list[Bipartition]:
    """Adjoint of induce_one_box: all one-box removals."""
    if bp.rank < 1:
        raise ValueError("cannot restrict the empty label")
    return _one_box(bp, _removable)
