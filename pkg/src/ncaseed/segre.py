"""Bihomogeneous forms on P1 x P1, determinants, and the regularity test.

A cubic algebra presented by a degree-4 tensor is 3-dimensional regular iff
the tensor is twisted, its two derivatives are independent, and the four
entries of the derivative matrix, read as (1,1)-forms via the Segre
identification, have empty common zero locus.  The emptiness test reduces to
binary-form gcds: for indeterminate p each entry is linear in q, a common q
exists iff all six 2x2 minors of the 4x2 coefficient matrix vanish at p, and
those minors are degree-2 binary forms in p.
"""

from __future__ import annotations

from typing import Optional

from . import linalg, superpot
from .errors import CaseSplitRequired, WrongDegree
from .freealg import NCPoly
from .geometry import CurveComponent, fresh_u
from .linalg import Branch
from .scalars import AssumptionSet, Poly, Scalar


class BiForm:
    """Bihomogeneous polynomial in (x1:y1) x (x2:y2) of fixed bidegree.

    Monomial (i, j) stands for x1^i y1^(d1-i) x2^j y2^(d2-j).
    """

    __slots__ = ("bidegree", "terms")

    def __init__(self, bidegree, terms: Optional[dict] = None):
        d1, d2 = bidegree
        if d1 < 0 or d2 < 0:
            raise WrongDegree("bidegree must be non-negative")
        self.bidegree = (d1, d2)
        t = {}
        for (i, j), c in (terms or {}).items():
            if not (0 <= i <= d1 and 0 <= j <= d2):
                raise WrongDegree(f"monomial {(i, j)} outside bidegree {bidegree}")
            if not c.is_zero():
                t[(i, j)] = c
        self.terms = t

    @staticmethod
    def zero(bidegree) -> "BiForm":
        return BiForm(bidegree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, i: int, j: int) -> Scalar:
        return self.terms.get((i, j), Scalar.zero())

    def __add__(self, other: "BiForm") -> "BiForm":
        if self.bidegree != other.bidegree:
            raise WrongDegree("cannot add different bidegrees")
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, Scalar.zero()) + c
        return BiForm(self.bidegree, t)

    def __sub__(self, other: "BiForm") -> "BiForm":
        return self + other.scale(-Scalar.one())

    def scale(self, c: Scalar) -> "BiForm":
        return BiForm(self.bidegree, {m: cc * c for m, cc in self.terms.items()})

    def __mul__(self, other: "BiForm") -> "BiForm":
        d1 = self.bidegree[0] + other.bidegree[0]
        d2 = self.bidegree[1] + other.bidegree[1]
        t: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                cur = t.get(m)
                t[m] = c1 * c2 if cur is None else cur + c1 * c2
        return BiForm((d1, d2), t)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiForm)
            and self.bidegree == other.bidegree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.bidegree, frozenset(self.terms.items())))

    def evaluate(self, p, q) -> Scalar:
        """Value at coordinate pairs p = (p0, p1), q = (q0, q1)."""
        d1, d2 = self.bidegree
        out = Scalar.zero()
        for (i, j), c in self.terms.items():
            v = c
            v = v * p[0] ** i * p[1] ** (d1 - i)
            v = v * q[0] ** j * q[1] ** (d2 - j)
            out = out + v
        return out

    def subs(self, mapping: dict) -> "BiForm":
        return BiForm(self.bidegree, {m: c.subs(mapping) for m, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        d1, d2 = self.bidegree
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            factors = []
            for name, e in (("x1", i), ("y1", d1 - i), ("x2", j), ("y2", d2 - j)):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = str(c)
            if not c.is_rational() and len(c.num.t) > 1:
                cs = f"({cs})"
            body = "*".join(factors) if factors else "1"
            if cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                parts.append(f"{cs}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"BiForm({self})"


def to_biform(t: NCPoly) -> BiForm:
    """Segre identification of a degree-2 tensor as a (1,1)-form."""
    if t.degree != 2:
        raise WrongDegree("to_biform expects degree 2")
    terms: dict = {}
    for w, c in t.terms.items():
        i = 1 if w[0] == "x" else 0
        j = 1 if w[1] == "x" else 0
        terms[(i, j)] = terms.get((i, j), Scalar.zero()) + c
    return BiForm((1, 1), terms)


def det_segre(M) -> BiForm:
    """Determinant of a 2x2 matrix of degree-2 tensors in the Segre product."""
    for row in M:
        for entry in row:
            if entry.degree != 2:
                raise WrongDegree("det_segre expects degree-2 entries")
    return to_biform(M[0][0]) * to_biform(M[1][1]) - to_biform(M[0][1]) * to_biform(M[1][0])


def vanishes_on_component(f: BiForm, c: CurveComponent) -> bool:
    """Does f vanish identically on the component?

    Substitutes the homogeneous parametrization and checks that the result
    is the zero element of Q(parameters)[u0, u1]; convention-free.
    """
    u = fresh_u()
    p, q = c.parametrize(u)
    return f.evaluate(p, q).is_zero()


# ---------------------------------------------------------------------------
# common zero locus of four (1,1)-forms
# ---------------------------------------------------------------------------


def _rows_in_q(entries):
    """Each (1,1)-form as (A, B) with form = A(p) q0 + B(p) q1; A, B are
    binary linear forms in p given as coefficient pairs (on p0, p1)."""
    rows = []
    for e in entries:
        if e.bidegree != (1, 1):
            raise WrongDegree("common_zero_empty expects (1,1)-forms")
        A = (e.coeff(1, 1), e.coeff(0, 1))
        B = (e.coeff(1, 0), e.coeff(0, 0))
        rows.append((A, B))
    return rows


def _minor(r1, r2):
    """A1*B2 - A2*B1 as a binary quadratic [c20, c11, c02] in p."""
    (a1, b1), (A1, B1) = r1  # ((p0, p1) coeffs of A), of B
    (a2, b2), (A2, B2) = r2
    return [
        a1 * A2 - a2 * A1,
        a1 * B2 + b1 * A2 - a2 * B1 - b2 * A1,
        b1 * B2 - b2 * B1,
    ]


def _univ_degree(coeffs: list[Scalar], assumptions: AssumptionSet) -> int:
    """Degree of sum(coeffs[k] t^k); -1 for zero. Splits when undecidable."""
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c.is_zero():
            continue
        status = assumptions.decide_scalar(c)
        if status == "nonzero":
            return k
        raise CaseSplitRequired(c.num)
    return -1


def _univ_gcd(polys: list[list[Scalar]], assumptions: AssumptionSet) -> list[Scalar]:
    """Monic gcd of univariate polynomials over the scalar field."""
    g: list[Scalar] = []
    for p in polys:
        g = _euclid(g, p, assumptions)
        if _univ_degree(g, assumptions) == 0:
            return [Scalar.one()]
    return g


def _trim(p: list[Scalar], assumptions) -> list[Scalar]:
    d = _univ_degree(p, assumptions)
    return [] if d < 0 else p[: d + 1]


def _euclid(f, g, assumptions) -> list[Scalar]:
    f, g = _trim(f, assumptions), _trim(g, assumptions)
    while g:
        f, g = g, _rem(f, g, assumptions)
    if not f:
        return []
    lead = f[-1]
    return [c / lead for c in f]


def _rem(f, g, assumptions) -> list[Scalar]:
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        factor = f[-1] / lg
        for k in range(dg + 1):
            f[shift + k] = f[shift + k] - factor * g[k]
        f.pop()
        f = _trim(f, assumptions)
    return f


def common_zero_empty(entries, assumptions: AssumptionSet | None = None) -> bool:
    """True iff no point of P1 x P1 annihilates all four (1,1)-forms.

    Raises CaseSplitRequired when the answer depends on parameter values;
    use ``common_zero_empty_cases`` for the full case tree.
    """
    A = assumptions if assumptions is not None else AssumptionSet.empty()
    rows = _rows_in_q(entries)
    minors = []
    for i in range(4):
        for j in range(i + 1, 4):
            m = _minor(rows[i], rows[j])
            if any(not c.is_zero() for c in m):
                minors.append(m)
    if not minors:
        return False  # rank <= 1 everywhere: every p admits a q
    # The chart p0 = 1, t = p1 sees every point of P1 except (0:1); a minor
    # [c20, c11, c02] reads there as c20 + c11 t + c02 t^2, and (0:1) is a
    # root exactly when the t^2 coefficient c02 vanishes.
    at_infinity = True
    for m in minors:
        c02 = m[2]
        if c02.is_zero():
            continue
        if A.decide_scalar(c02) == "nonzero":
            at_infinity = False
            break
        raise CaseSplitRequired(c02.num)
    if at_infinity:
        return False
    try:
        g = _univ_gcd(minors, A)
        return _univ_degree(g, A) < 1
    except CaseSplitRequired:
        # The gcd chain stalled on an undecidable leading coefficient.  Two
        # minors with nonvanishing projective resultant still certify an
        # empty locus, and the resultant often stays decidable.
        for i in range(len(minors)):
            for j in range(i + 1, len(minors)):
                if A.decide_scalar(_quad_resultant(minors[i], minors[j])) == "nonzero":
                    return True
        raise


def _quad_resultant(m1, m2) -> Scalar:
    """Resultant of two binary quadratic forms [c20, c11, c02]."""
    a1, b1, c1 = m1
    a2, b2, c2 = m2
    ac = a1 * c2 - a2 * c1
    ab = a1 * b2 - a2 * b1
    bc = b1 * c2 - b2 * c1
    return ac * ac - ab * bc


def common_zero_empty_cases(entries, assumptions: AssumptionSet | None = None):
    A = assumptions if assumptions is not None else AssumptionSet.empty()

    def fn(asmp):
        return common_zero_empty([e.subs(asmp.substitution()) for e in entries], asmp)

    return linalg.case_split(fn, A)


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------


def m_matrix_biforms(omega: NCPoly) -> list[BiForm]:
    M = superpot.m_matrix(omega)
    return [to_biform(M[0][0]), to_biform(M[0][1]), to_biform(M[1][0]), to_biform(M[1][1])]


def is_as_regular(omega: NCPoly, assumptions: AssumptionSet | None = None) -> list[Branch]:
    """Case tree for 3-dimensional regularity of D(omega).

    Each branch value is a bool: twisted + standard + empty common zero
    locus of the derivative-matrix entries.
    """
    A = assumptions if assumptions is not None else AssumptionSet.empty()

    def fn(asmp):
        om = omega.subs(asmp.substitution())
        if om.is_zero():
            return False
        theta = superpot.twisting_matrix(om, asmp)
        if theta is None:
            return False
        if not superpot.is_standard(om, asmp):
            return False
        return common_zero_empty(m_matrix_biforms(om), asmp)

    return linalg.case_split(fn, A)


def decide_as_regular(omega: NCPoly, assumptions: AssumptionSet | None = None) -> bool:
    """Single-branch convenience wrapper; raises if the tree genuinely splits."""
    branches = is_as_regular(omega, assumptions)
    values = {br.value for br in branches}
    if len(values) != 1:
        detail = "; ".join(f"{br.assumptions}: {br.value}" for br in branches)
        raise CaseSplitRequired(Poly.const(0), f"regularity splits: {detail}")
    return values.pop()
