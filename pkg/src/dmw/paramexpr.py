"""Integer polynomials in small named unknowns, and their text grammar.

These expressions are the entries of parametrised decomposition matrices
and the payloads of constraints.  Coefficients are integers; products of
unknowns are allowed (the constraint arguments are genuinely nonlinear).

Grammar accepted by :func:`parse_expr`::

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := integer | ident | '(' expr ')' | '-' factor

Identifiers match ``[a-z][a-z0-9_]*``.  Parse errors carry the byte
offset of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass

Monomial = tuple[str, ...]  # sorted unknown names, with multiplicity


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"at offset {offset}: {message}")
        self.offset = offset


@dataclass(frozen=True)
class ParamExpr:
    """Canonical integer polynomial: sorted (monomial, coefficient) pairs,
    no zero coefficients."""

    terms: tuple[tuple[Monomial, int], ...]

    @staticmethod
    def make(terms: dict[Monomial, int]) -> "ParamExpr":
        clean = {m: c for m, c in terms.items() if c != 0}
        return ParamExpr(tuple(sorted(clean.items())))

    @staticmethod
    def const(c: int) -> "ParamExpr":
        return ParamExpr.make({(): int(c)})

    @staticmethod
    def var(name: str) -> "ParamExpr":
        return ParamExpr.make({(name,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m, _ in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms[0][1] if self.terms else 0

    def unknowns(self) -> set[str]:
        return {name for m, _ in self.terms for name in m}

    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    def is_linear(self) -> bool:
        return self.degree() <= 1

    def __add__(self, other: "ParamExpr") -> "ParamExpr":
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return ParamExpr.make(acc)

    def __neg__(self) -> "ParamExpr":
        return ParamExpr(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "ParamExpr") -> "ParamExpr":
        return self + (-other)

    def __mul__(self, other: "ParamExpr") -> "ParamExpr":
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(sorted(m1 + m2))
                acc[m] = acc.get(m, 0) + c1 * c2
        return ParamExpr.make(acc)

    def scale(self, c: int) -> "ParamExpr":
        return ParamExpr.make({m: c * k for m, k in self.terms})

    def eval(self, assignment: dict[str, int]) -> int:
        total = 0
        for m, c in self.terms:
            v = c
            for name in m:
                if name not in assignment:
                    raise KeyError(f"unbound unknown {name!r}")
                v *= assignment[name]
            total += v
        return total

    def substitute(self, assignment: dict[str, int]) -> "ParamExpr":
        """Partial evaluation: bound unknowns replaced by their values."""
        acc: dict[Monomial, int] = {}
        for m, c in self.terms:
            rest = []
            for name in m:
                if name in assignment:
                    c *= assignment[name]
                else:
                    rest.append(name)
            key = tuple(sorted(rest))
            acc[key] = acc.get(key, 0) + c
        return ParamExpr.make(acc)

    def coefficient(self, name: str) -> "ParamExpr":
        """d(self)/d(name) restricted to terms linear in name."""
        acc: dict[Monomial, int] = {}
        for m, c in self.terms:
            if m.count(name) == 1:
                rest = tuple(x for x in m if x != name)
                acc[rest] = acc.get(rest, 0) + c
        return ParamExpr.make(acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # variables first (by degree then name), constant last
        def key(item):
            m, _ = item
            return (-len(m) if False else 0, m == (), m)

        parts = []
        for m, c in sorted(self.terms, key=key):
            mono = "*".join(m)
            if not m:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+") + body)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


ZERO = ParamExpr.const(0)
ONE = ParamExpr.const(1)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> ParamExpr:
        acc = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                acc = acc + self.term()
            elif ch == "-":
                self.pos += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> ParamExpr:
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> ParamExpr:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.factor()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return ParamExpr.const(int(self.text[start : self.pos]))
        if ch.isalpha() and ch.islower():
            start = self.pos
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                if not (self.text[self.pos].islower() or self.text[self.pos].isdigit() or self.text[self.pos] == "_"):
                    break
                self.pos += 1
            return ParamExpr.var(self.text[start : self.pos])
        self.error(f"unexpected character {ch!r}" if ch else "unexpected end of input")


def parse_expr(text: str) -> ParamExpr:
    p = _Parser(text)
    out = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        p.error(f"trailing input {text[p.pos:]!r}")
    return out
