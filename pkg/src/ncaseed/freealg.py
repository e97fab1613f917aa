"""Homogeneous noncommutative polynomials in k<x,y> with tensor operators.

Words over {x, y} stand for basis tensors of V**m; an NCPoly maps words of a
fixed length to Scalar coefficients.  The operators provided are exactly the
ones the superpotential calculus needs: cyclic rotation, left/right partial
derivatives, slotwise linear maps and multilinear point evaluation.

Convention note.  A LinearMap2 (a b; c d) acts on projective points by the
matrix-times-column rule (p0, p1) -> (a p0 + b p1, c p0 + d p1).  Inside
slot_map the same matrix moves the generators contragrediently,
x -> a*x + b*y and y -> c*x + d*y; this is the orientation under which the
bundled twist catalogs reproduce their reference relation tables, and it is
fixed once here for the whole library.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import (
    ArityMismatch,
    DegreeTooSmall,
    SingularMatrix,
    WrongDegree,
    ZeroVector,
)
from .scalars import Scalar

GENERATORS = ("x", "y")

# canonical word order: x before y, i.e. plain string comparison
WORD_ORDER_KEY = str


def words_of_degree(n: int) -> list[str]:
    """All words of length n in canonical order."""
    out = [""]
    for _ in range(n):
        out = [w + g for w in out for g in GENERATORS]
    return sorted(out)


class NCPoly:
    """Homogeneous element of the free algebra on x, y."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Optional[dict] = None):
        if degree < 0:
            raise WrongDegree("degree must be non-negative")
        self.degree = degree
        t = {}
        for w, c in (terms or {}).items():
            if len(w) != degree or any(ch not in "xy" for ch in w):
                raise WrongDegree(f"word {w!r} does not have degree {degree}")
            if not c.is_zero():
                t[w] = c
        self.terms = t

    # -- constructors

    @staticmethod
    def zero(degree: int) -> "NCPoly":
        return NCPoly(degree, {})

    @staticmethod
    def word(w: str, coeff: Scalar | None = None) -> "NCPoly":
        return NCPoly(len(w), {w: coeff if coeff is not None else Scalar.one()})

    @staticmethod
    def generator(g: str) -> "NCPoly":
        if g not in GENERATORS:
            raise WrongDegree(f"unknown generator {g!r}")
        return NCPoly.word(g)

    # -- queries

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w: str) -> Scalar:
        return self.terms.get(w, Scalar.zero())

    def coeff_vector(self, order: Optional[Sequence[str]] = None) -> list[Scalar]:
        if order is None:
            order = words_of_degree(self.degree)
        return [self.coeff(w) for w in order]

    def support(self) -> list[str]:
        return sorted(self.terms, key=WORD_ORDER_KEY)

    # -- ring structure

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if self.degree != other.degree:
            raise WrongDegree("cannot add different degrees")
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, Scalar.zero()) + c
        return NCPoly(self.degree, t)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.degree, {w: -c for w, c in self.terms.items()})

    def scale(self, c: Scalar) -> "NCPoly":
        return NCPoly(self.degree, {w: cc * c for w, cc in self.terms.items()})

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                cur = t.get(w)
                t[w] = c1 * c2 if cur is None else cur + c1 * c2
        return NCPoly(self.degree + other.degree, t)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NCPoly)
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def subs(self, mapping: dict) -> "NCPoly":
        return NCPoly(self.degree, {w: c.subs(mapping) for w, c in self.terms.items()})

    def proportional_to(self, other: "NCPoly") -> Optional[Scalar]:
        """Return nonzero t with self == t*other, or None."""
        if self.degree != other.degree or self.is_zero() or other.is_zero():
            return None
        if set(self.terms) != set(other.terms):
            return None
        w0 = next(iter(self.terms))
        t = self.terms[w0] / other.terms[w0]
        if self == other.scale(t):
            return t
        return None

    # -- display

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in self.support():
            c = self.terms[w]
            cs = _coeff_str(c)
            body = _word_str(w)
            if body == "":
                text = cs if cs not in ("", "-") else cs + "1"
            elif cs == "":
                text = body
            elif cs == "-":
                text = "-" + body
            else:
                text = f"{cs}*{body}"
            if parts and not text.startswith("-"):
                parts.append("+ " + text)
            elif parts:
                parts.append("- " + text[1:])
            else:
                parts.append(text)
        return " ".join(parts)

    def __repr__(self):
        return f"NCPoly({self})"


def _word_str(w: str) -> str:
    if not w:
        return ""
    runs = []
    cur, n = w[0], 1
    for ch in w[1:]:
        if ch == cur:
            n += 1
        else:
            runs.append((cur, n))
            cur, n = ch, 1
    runs.append((cur, n))
    return "*".join(f"{g}^{n}" if n > 1 else g for g, n in runs)


def _coeff_str(c: Scalar) -> str:
    """Coefficient prefix for a word; '' means +1, '-' means -1."""
    if c == Scalar.one():
        return ""
    if c == -Scalar.one():
        return "-"
    s = str(c)
    if c.is_rational() or (len(c.num.t) == 1 and c.den.is_const()):
        return s
    return f"({s})" if not s.startswith("(") else s


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def rotate(omega: NCPoly) -> NCPoly:
    """Cyclic rotation sending w1...wm to wm w1...w(m-1)."""
    if omega.degree < 2:
        raise DegreeTooSmall("rotation needs degree >= 2")
    return NCPoly(omega.degree, {w[-1] + w[:-1]: c for w, c in omega.terms.items()})


def left_derivative(omega: NCPoly, g: str) -> NCPoly:
    """Sum of tails of words starting with generator g."""
    if omega.degree < 1:
        raise DegreeTooSmall("derivative needs degree >= 1")
    t: dict = {}
    for w, c in omega.terms.items():
        if w[0] == g:
            tail = w[1:]
            cur = t.get(tail)
            t[tail] = c if cur is None else cur + c
    return NCPoly(omega.degree - 1, t)


def right_derivative(omega: NCPoly, g: str) -> NCPoly:
    """Sum of heads of words ending with generator g."""
    if omega.degree < 1:
        raise DegreeTooSmall("derivative needs degree >= 1")
    t: dict = {}
    for w, c in omega.terms.items():
        if w[-1] == g:
            head = w[:-1]
            cur = t.get(head)
            t[head] = c if cur is None else cur + c
    return NCPoly(omega.degree - 1, t)


class LinearMap2:
    """2x2 Scalar matrix; see the module docstring for the action conventions."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Scalar, b: Scalar, c: Scalar, d: Scalar):
        self.a, self.b, self.c, self.d = a, b, c, d

    @staticmethod
    def identity() -> "LinearMap2":
        return LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), Scalar.one())

    @staticmethod
    def from_rows(rows) -> "LinearMap2":
        (a, b), (c, d) = rows
        return LinearMap2(a, b, c, d)

    @staticmethod
    def of_rationals(a, b, c, d) -> "LinearMap2":
        return LinearMap2(*(Scalar.rational(v) for v in (a, b, c, d)))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def is_identity(self) -> bool:
        return self == LinearMap2.identity()

    def __mul__(self, other: "LinearMap2") -> "LinearMap2":
        return LinearMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, n: int) -> "LinearMap2":
        if n < 0:
            return self.inverse() ** (-n)
        out = LinearMap2.identity()
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "LinearMap2":
        det = self.det()
        if det.is_zero():
            raise SingularMatrix(f"matrix {self} is singular")
        return LinearMap2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def transpose(self) -> "LinearMap2":
        return LinearMap2(self.a, self.c, self.b, self.d)

    def scale(self, t: Scalar) -> "LinearMap2":
        return LinearMap2(self.a * t, self.b * t, self.c * t, self.d * t)

    def subs(self, mapping: dict) -> "LinearMap2":
        return LinearMap2(*(e.subs(mapping) for e in self.entries()))

    def apply_point(self, coords):
        """Matrix-times-column action on homogeneous coordinates."""
        p0, p1 = coords
        return (self.a * p0 + self.b * p1, self.c * p0 + self.d * p1)

    def generator_image(self, g: str):
        """Image of a generator as [(letter, coeff), ...] (row action)."""
        if g == "x":
            return [("x", self.a), ("y", self.b)]
        if g == "y":
            return [("x", self.c), ("y", self.d)]
        raise WrongDegree(f"unknown generator {g!r}")

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap2) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def __repr__(self):
        return f"LinearMap2({self})"


def slot_map(omega: NCPoly, maps: Sequence[LinearMap2]) -> NCPoly:
    """Apply maps[i] to tensor slot i and expand linearly.

    Composition law under this action: applying [A per slot] and then
    [B per slot] equals applying [A*B per slot].
    """
    if len(maps) != omega.degree:
        raise ArityMismatch(f"need {omega.degree} maps, got {len(maps)}")
    out: dict = {}
    for w, c in omega.terms.items():
        expansion = [("", c)]
        for i, letter in enumerate(w):
            image = maps[i].generator_image(letter)
            expansion = [
                (prefix + g, coeff * ic)
                for prefix, coeff in expansion
                for g, ic in image
                if not ic.is_zero()
            ]
        for word, coeff in expansion:
            cur = out.get(word)
            out[word] = coeff if cur is None else cur + coeff
    return NCPoly(omega.degree, out)


def evaluate_multilinear(f: NCPoly, points: Sequence) -> Scalar:
    """Evaluate f as a multilinear form at concrete coordinate pairs.

    Each point is a pair (p0, p1) of Scalars; x reads p0 and y reads p1.
    """
    if len(points) != f.degree:
        raise ArityMismatch(f"need {f.degree} points, got {len(points)}")
    pts = []
    for p in points:
        p0, p1 = p
        if p0.is_zero() and p1.is_zero():
            raise ZeroVector("zero vector is not a point representative")
        pts.append((p0, p1))
    total = Scalar.zero()
    for w, c in f.terms.items():
        v = c
        for i, letter in enumerate(w):
            v = v * (pts[i][0] if letter == "x" else pts[i][1])
        total = total + v
    return total


# ---------------------------------------------------------------------------
# span helpers (coefficient-vector linear algebra lives in linalg; these are
# the NCPoly-facing wrappers)
# ---------------------------------------------------------------------------


def coefficient_rows(polys: Iterable[NCPoly], degree: int) -> list[list[Scalar]]:
    order = words_of_degree(degree)
    return [p.coeff_vector(order) for p in polys]
