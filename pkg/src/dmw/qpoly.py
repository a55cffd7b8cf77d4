"""Exact arithmetic for polynomials in q kept in factored cyclotomic form.

A value is ``scalar * q^k * prod_d Phi_d^(m_d)`` with an exact rational
scalar.  Character degrees and group orders are stored this way, never
densely, because that is the shape in which all the tables present them;
equality is then field-by-field.  Dense coefficient vectors are a derived
view used for evaluation, comparison and for the occasional sum or
difference that does not factor back into cyclotomics.

Text form, used in datasets and on the command line:

    <rational> q^<k> P<d>[^<m>] ...

whitespace separated, e.g. ``1/2 q^3 P1^4 P3``.  The rational may be
omitted when it is 1, the q-power when it is 0.  The zero polynomial
prints as ``0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class NonFactorableError(ValueError):
    """A dense polynomial did not refactor into scalar * q^k * prod Phi_d.

    Carries the offending dense polynomial so callers can keep working
    with it.
    """

    def __init__(self, dense: "DensePoly"):
        super().__init__(f"not a product of cyclotomics: {dense}")
        self.dense = dense


@dataclass(frozen=True)
class DensePoly:
    """Polynomial over Q as a coefficient tuple indexed by q-degree.

    Leading coefficient is nonzero unless the polynomial is zero (empty
    tuple).
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(seq) -> "DensePoly":
        cs = [Fraction(c) for c in seq]
        while cs and cs[-1] == 0:
            cs.pop()
        return DensePoly(tuple(cs))

    @staticmethod
    def zero() -> "DensePoly":
        return DensePoly(())

    @staticmethod
    def const(c) -> "DensePoly":
        return DensePoly.of([c])

    @staticmethod
    def qpow(k: int) -> "DensePoly":
        return DensePoly.of([0] * k + [1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "DensePoly") -> "DensePoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return DensePoly.of(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __neg__(self) -> "DensePoly":
        return DensePoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        return self + (-other)

    def __mul__(self, other: "DensePoly") -> "DensePoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return DensePoly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb != 0:
                    out[i + j] += ca * cb
        return DensePoly.of(out)

    def scale(self, c) -> "DensePoly":
        c = Fraction(c)
        if c == 0:
            return DensePoly.zero()
        return DensePoly(tuple(c * x for x in self.coeffs))

    def divmod(self, other: "DensePoly") -> tuple["DensePoly", "DensePoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        lead = other.coeffs[-1]
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            f = rem[-1] / lead
            k = len(rem) - 1 - d
            quo[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return DensePoly.of(quo), DensePoly.of(rem)

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation(self) -> int:
        """Order of vanishing at q=0.  Undefined for the zero polynomial."""
        if self.is_zero():
            raise ValueError("zero polynomial has no q-valuation")
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "1" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if i > 0 and abs(c) == 1:
                term = mono if c > 0 else f"-{mono}"
            else:
                term = f"{c}*{mono}" if i > 0 else str(c)
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> DensePoly:
    """d-th cyclotomic polynomial, by exact division of q^d - 1."""
    if d < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {d}")
    num = DensePoly.of([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            q, r = num.divmod(cyclotomic(e))
            assert r.is_zero()
            num = q
    return num


@dataclass(frozen=True)
class CycloPoly:
    """scalar * q^qexp * prod Phi_d^(m_d), canonical and immutable.

    The zero polynomial is (0, 0, ()).  Otherwise scalar != 0, qexp >= 0
    and factors holds pairs (d, m) with m >= 1, sorted by d.
    """

    scalar: Fraction
    qexp: int
    factors: tuple[tuple[int, int], ...]

    @staticmethod
    def make(scalar, qexp: int = 0, factors=None) -> "CycloPoly":
        scalar = Fraction(scalar)
        if scalar == 0:
            return CycloPoly(Fraction(0), 0, ())
        if qexp < 0:
            raise ValueError("negative q-power")
        fd: dict[int, int] = {}
        for d, m in factors or ():
            if d < 1 or m < 0:
                raise ValueError(f"bad cyclotomic factor ({d}, {m})")
            if m:
                fd[d] = fd.get(d, 0) + m
        return CycloPoly(scalar, qexp, tuple(sorted(fd.items())))

    @staticmethod
    def zero() -> "CycloPoly":
        return CycloPoly(Fraction(0), 0, ())

    @staticmethod
    def one() -> "CycloPoly":
        return CycloPoly.make(1)

    def is_zero(self) -> bool:
        return self.scalar == 0

    def __mul__(self, other: "CycloPoly") -> "CycloPoly":
        if self.is_zero() or other.is_zero():
            return CycloPoly.zero()
        return CycloPoly.make(
            self.scalar * other.scalar,
            self.qexp + other.qexp,
            self.factors + other.factors,
        )

    def scale(self, c) -> "CycloPoly":
        return CycloPoly.make(self.scalar * Fraction(c), self.qexp, self.factors)

    def expand(self) -> DensePoly:
        out = DensePoly.const(self.scalar)
        if self.is_zero():
            return DensePoly.zero()
        out = out * DensePoly.qpow(self.qexp)
        for d, m in self.factors:
            phi = cyclotomic(d)
            for _ in range(m):
                out = out * phi
        return out

    def add(self, other: "CycloPoly") -> "CycloPoly":
        """Exact sum, refactored.  Raises NonFactorableError when the sum
        is not a pure cyclotomic product (callers must handle it)."""
        dense = self.expand() + other.expand()
        fact = refactor(dense)
        if fact is None:
            raise NonFactorableError(dense)
        return fact

    def sub(self, other: "CycloPoly") -> "CycloPoly":
        return self.add(other.scale(-1))

    def eval(self, q0) -> Fraction:
        q0 = Fraction(q0)
        if self.is_zero():
            return Fraction(0)
        acc = self.scalar * q0**self.qexp
        for d, m in self.factors:
            acc *= cyclotomic(d).eval(q0) ** m
        return acc

    def valuation_q(self) -> int:
        """Order of vanishing at q=0; the a-value when self is a degree."""
        if self.is_zero():
            raise ValueError("zero polynomial has no q-valuation")
        return self.qexp

    def phi_exp(self, d: int) -> int:
        """Exponent of Phi_d (0 if absent)."""
        if self.is_zero():
            raise ValueError("zero polynomial has no Phi-valuation")
        for e, m in self.factors:
            if e == d:
                return m
        return 0

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return self.qexp + sum(cyclotomic(d).degree * m for d, m in self.factors)

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if self.scalar != 1 or (self.qexp == 0 and not self.factors):
            parts.append(str(self.scalar))
        if self.qexp == 1:
            parts.append("q")
        elif self.qexp:
            parts.append(f"q^{self.qexp}")
        for d, m in self.factors:
            parts.append(f"P{d}" if m == 1 else f"P{d}^{m}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()


_phi_sieve: list[int] = [0, 1]


def _euler_phi_upto(n: int) -> list[int]:
    global _phi_sieve
    if len(_phi_sieve) <= n:
        size = max(n + 1, 2 * len(_phi_sieve))
        sieve = list(range(size))
        for p in range(2, size):
            if sieve[p] == p:  # p prime
                for k in range(p, size, p):
                    sieve[k] -= sieve[k] // p
        _phi_sieve = sieve
    return _phi_sieve


def _cyclotomic_indices(max_degree: int) -> list[int]:
    """All d whose cyclotomic polynomial has degree <= max_degree.

    phi(d) >= sqrt(d/2), so scanning d <= 2*max_degree^2 is complete.
    """
    if max_degree < 1:
        return []
    bound = 2 * max_degree * max_degree + 1
    sieve = _euler_phi_upto(bound)
    return [d for d in range(1, bound + 1) if sieve[d] <= max_degree]


def refactor(dense: DensePoly) -> CycloPoly | None:
    """Factor a dense polynomial as scalar * q^k * prod Phi_d, or None.

    Trial division by Phi_d over every index whose cyclotomic degree fits;
    all degrees appearing in the tables factor with d <= 18, but nothing
    here depends on that bound.
    """
    if dense.is_zero():
        return CycloPoly.zero()
    k = dense.valuation()
    rem = DensePoly(dense.coeffs[k:])
    factors = []
    for d in _cyclotomic_indices(rem.degree):
        if rem.degree == 0:
            break
        phi = cyclotomic(d)
        if phi.degree > rem.degree:
            continue
        while rem.degree >= phi.degree:
            q, r = rem.divmod(phi)
            if not r.is_zero():
                break
            factors.append((d, 1))
            rem = q
    if rem.degree != 0:
        return None
    return CycloPoly.make(rem.coeffs[0], k, factors)


_TOKEN = re.compile(r"^(?:(?P<rat>-?\d+(?:/\d+)?)|(?P<q>q(?:\^(?P<qe>\d+))?)|P(?P<d>\d+)(?:\^(?P<m>\d+))?)$")


def parse_poly(text: str) -> CycloPoly:
    """Parse the factored text grammar, e.g. ``1/2 q^3 P1^4 P3``."""
    toks = text.split()
    if not toks:
        raise ValueError("empty polynomial text")
    if toks == ["0"]:
        return CycloPoly.zero()
    scalar = Fraction(1)
    qexp = 0
    factors: list[tuple[int, int]] = []
    seen_scalar = seen_q = False
    for pos, tok in enumerate(toks):
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"bad token {tok!r} at position {pos} in {text!r}")
        if m.group("rat") is not None:
            if seen_scalar or seen_q or factors:
                raise ValueError(f"misplaced scalar {tok!r} in {text!r}")
            scalar = Fraction(m.group("rat"))
            seen_scalar = True
        elif m.group("q") is not None:
            if seen_q or factors:
                raise ValueError(f"misplaced q-power {tok!r} in {text!r}")
            qexp = int(m.group("qe") or 1)
            seen_q = True
        else:
            factors.append((int(m.group("d")), int(m.group("m") or 1)))
    return CycloPoly.make(scalar, qexp, factors)
