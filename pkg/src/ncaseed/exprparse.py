"""Recursive-descent parser for noncommutative polynomial expressions.

Grammar (x, y are the generators; parameters commute with everything):

    expr   := term (('+'|'-') term)*
    term   := factor (('*' factor) | ('/' factor))*
    factor := '-' factor | atom ['^' natural]
    atom   := integer ['/' integer] | parameterIdent | 'x' | 'y' | '(' expr ')'

Explicit '*' is required; juxtaposition like ``xy`` is a syntax error, which
keeps multi-letter parameter names unambiguous.  '^' applies to a single
generator, a parameter, or a parenthesized scalar subexpression; powers of
words like ``(x*y)^2`` are rejected so the degree of a term stays syntactic.
'/' divides by a scalar (integer or parenthesized parameter expression).

``parse_ncpoly`` additionally checks that every term has the same degree in
x and y.  Round trip: ``parse_ncpoly(str(p)) == p`` for any NCPoly whose
coefficients are free of adjoined square roots.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError, MixedDegree, NonScalarEntry, UnknownSymbol
from .freealg import LinearMap2, NCPoly
from .scalars import Scalar, declare_parameter, is_declared

_OPS = set("+-*/^()[],")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Val:
    """Possibly-inhomogeneous parse value: degree -> NCPoly."""

    __slots__ = ("parts",)

    def __init__(self, parts=None):
        self.parts = {d: p for d, p in (parts or {}).items() if not p.is_zero()}

    @staticmethod
    def scalar(s: Scalar) -> "_Val":
        return _Val({0: NCPoly(0, {"": s})})

    @staticmethod
    def gen(g: str) -> "_Val":
        return _Val({1: NCPoly.word(g)})

    def __add__(self, other):
        parts = dict(self.parts)
        for d, p in other.parts.items():
            parts[d] = parts[d] + p if d in parts else p
        return _Val(parts)

    def __neg__(self):
        return _Val({d: -p for d, p in self.parts.items()})

    def __mul__(self, other):
        parts: dict = {}
        for d1, p1 in self.parts.items():
            for d2, p2 in other.parts.items():
                d = d1 + d2
                q = p1 * p2
                parts[d] = parts[d] + q if d in parts else q
        return _Val(parts)

    def is_scalar(self) -> bool:
        return not self.parts or set(self.parts) == {0}

    def as_scalar(self) -> Scalar:
        if not self.parts:
            return Scalar.zero()
        return self.parts[0].coeff("")

    def as_ncpoly(self) -> NCPoly:
        if not self.parts:
            return NCPoly.zero(0)
        if len(self.parts) > 1:
            degs = sorted(self.parts)
            raise MixedDegree(f"terms of degrees {degs} mixed in one expression")
        (d, p), = self.parts.items()
        return p


class _Parser:
    def __init__(self, text: str, params):
        self.tokens = _tokenize(text)
        self.pos = 0
        if params is not None:
            for name in params:
                declare_parameter(name)

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse_expr(self) -> _Val:
        if self.peek()[0] == "-":
            self.take()
            value = -self.parse_term()
        else:
            value = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.parse_term()
            value = value + (rhs if op == "+" else -rhs)
        return value

    def parse_term(self) -> _Val:
        value = self.parse_factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.parse_factor()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_scalar():
                    raise ExprSyntaxError("'/' needs a scalar divisor", pos)
                s = rhs.as_scalar()
                if s.is_zero():
                    raise ExprSyntaxError("division by zero", pos)
                value = value * _Val.scalar(s.inverse())
        return value

    def parse_factor(self) -> _Val:
        kind, text, pos = self.peek()
        if kind == "-":
            self.take()
            return -self.parse_factor()
        value, powerable = self.parse_atom()
        if self.peek()[0] == "^":
            _, _, cpos = self.take()
            etok = self.take("int")
            if not powerable:
                raise ExprSyntaxError("'^' applies to a generator, parameter or parenthesized scalar", cpos)
            exp = int(etok[1])
            out = _Val.scalar(Scalar.one())
            for _ in range(exp):
                out = out * value
            return out
        return value

    def parse_atom(self):
        """Returns (value, powerable)."""
        kind, text, pos = self.take()
        if kind == "int":
            if self.peek()[0] == "/" and self.tokens[self.pos + 1][0] == "int":
                self.take()
                den = self.take("int")
                if int(den[1]) == 0:
                    raise ExprSyntaxError("division by zero", den[2])
                return _Val.scalar(Scalar.rational(Fraction(int(text), int(den[1])))), False
            return _Val.scalar(Scalar.rational(int(text))), False
        if kind == "ident":
            if text in ("x", "y"):
                return _Val.gen(text), True
            if not is_declared(text):
                raise UnknownSymbol(f"unknown symbol {text!r} (declare it as a parameter first)")
            return _Val.scalar(Scalar.param(text)), True
        if kind == "(":
            value = self.parse_expr()
            self.take(")")
            return value, value.is_scalar()
        raise ExprSyntaxError(f"unexpected token {text!r}", pos)

    def parse_scalar_expr(self) -> Scalar:
        value = self.parse_expr()
        if not value.is_scalar():
            raise NonScalarEntry("expected a scalar (degree-0) expression")
        return value.as_scalar()


def parse_ncpoly(text: str, params=None) -> NCPoly:
    """Parse a homogeneous noncommutative polynomial."""
    p = _Parser(text, params)
    value = p.parse_expr()
    p.take("end")
    return value.as_ncpoly()


def parse_scalar(text: str, params=None) -> Scalar:
    p = _Parser(text, params)
    value = p.parse_scalar_expr()
    p.take("end")
    return value


def parse_matrix(text: str, params=None) -> LinearMap2:
    """Parse ``[[e11,e12],[e21,e22]]`` with scalar-expression entries."""
    p = _Parser(text, params)
    p.take("[")
    rows = []
    for r in range(2):
        p.take("[")
        row = [p.parse_scalar_expr()]
        p.take(",")
        row.append(p.parse_scalar_expr())
        p.take("]")
        rows.append(row)
        if r == 0:
            p.take(",")
    p.take("]")
    p.take("end")
    return LinearMap2.from_rows(rows)


def parse_point(text: str, params=None):
    """Parse ``[p0,p1]`` as a coordinate pair of Scalars."""
    p = _Parser(text, params)
    p.take("[")
    p0 = p.parse_scalar_expr()
    p.take(",")
    p1 = p.parse_scalar_expr()
    p.take("]")
    p.take("end")
    return (p0, p1)
