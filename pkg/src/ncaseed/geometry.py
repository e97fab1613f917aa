"""Points, Mobius maps, curve components in P1 x P1, and geometric pairs.

A geometric pair is a union E of vertical lines {p} x P1, horizontal lines
P1 x {q} and Mobius graphs C_tau = {(p, tau(p))}, together with a piecewise
automorphism sigma whose first output coordinate always equals the second
input coordinate.  Sigma is stored per source component as a target
component plus, for horizontal-line sources only, a free Mobius datum; on
all other component kinds the map is forced by the geometry.

Matrices act on points by matrix-times-column: (a b; c d) sends (p0 : p1)
to (a p0 + b p1 : c p0 + d p1).
"""

from __future__ import annotations

from typing import Optional, Sequence

from . import exprparse
from .errors import (
    CaseSplitRequired,
    InvalidPair,
    PointNotOnComponent,
    SingularMatrix,
    UnknownType,
    ZeroVector,
)
from .freealg import LinearMap2
from .scalars import AssumptionSet, Poly, Scalar, adjoin_sqrt, declare_parameter


def fresh_u():
    """The reserved homogeneous parameter point (u0 : u1)."""
    return (Scalar(Poly.var("u0"), Poly.const(1)), Scalar(Poly.var("u1"), Poly.const(1)))


def _decide_zero(s: Scalar, assumptions: AssumptionSet) -> bool:
    """True iff s == 0; raises CaseSplitRequired when undecided."""
    if s.is_zero():
        return True
    if assumptions.decide_scalar(s) == "nonzero":
        return False
    raise CaseSplitRequired(s.num)


class ProjPoint:
    """Point of P1 with a canonical representative (first nonzero coord = 1)."""

    __slots__ = ("coords",)

    def __init__(self, p0: Scalar, p1: Scalar):
        if p0.is_zero() and p1.is_zero():
            raise ZeroVector("(0,0) does not represent a point")
        if not p0.is_zero():
            inv = p0.inverse()
            self.coords = (Scalar.one(), p1 * inv)
        else:
            self.coords = (Scalar.zero(), Scalar.one())

    @staticmethod
    def of_rationals(p0, p1) -> "ProjPoint":
        return ProjPoint(Scalar.rational(p0), Scalar.rational(p1))

    def cross(self, other: "ProjPoint") -> Scalar:
        a0, a1 = self.coords
        b0, b1 = other.coords
        return a0 * b1 - a1 * b0

    def same_point(self, other: "ProjPoint", assumptions: AssumptionSet) -> bool:
        return _decide_zero(self.cross(other), assumptions)

    def subs(self, mapping: dict) -> "ProjPoint":
        return ProjPoint(*(c.subs(mapping) for c in self.coords))

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return f"[{self.coords[0]},{self.coords[1]}]"

    def __repr__(self):
        return f"ProjPoint({self})"


P_POINT = None  # initialized below
Q_POINT = None


class Mobius:
    """Invertible 2x2 matrix modulo scalars, acting on P1."""

    __slots__ = ("mat",)

    def __init__(self, mat: LinearMap2):
        if mat.det().is_zero():
            raise SingularMatrix(f"{mat} does not define a Mobius map")
        scale = next(e for e in mat.entries() if not e.is_zero())
        inv = scale.inverse()
        self.mat = LinearMap2(*(e * inv for e in mat.entries()))

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(LinearMap2.identity())

    @staticmethod
    def of_rationals(a, b, c, d) -> "Mobius":
        return Mobius(LinearMap2.of_rationals(a, b, c, d))

    def apply(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(*self.mat.apply_point(p.coords))

    def apply_coords(self, coords):
        return self.mat.apply_point(coords)

    def compose(self, other: "Mobius") -> "Mobius":
        """self after other (matrix product self.mat * other.mat)."""
        return Mobius(self.mat * other.mat)

    def inverse(self) -> "Mobius":
        return Mobius(self.mat.inverse())

    def power(self, n: int) -> "Mobius":
        return Mobius(self.mat ** n)

    def subs(self, mapping: dict) -> "Mobius":
        return Mobius(self.mat.subs(mapping))

    def __eq__(self, other):
        return isinstance(other, Mobius) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __str__(self):
        return str(self.mat)

    def __repr__(self):
        return f"Mobius({self})"


P_POINT = ProjPoint.of_rationals(1, 0)
Q_POINT = ProjPoint.of_rationals(0, 1)


# ---------------------------------------------------------------------------
# curve components
# ---------------------------------------------------------------------------


class CurveComponent:
    kind = "?"

    def sort_key(self):
        return (self.kind, str(self))


class VLine(CurveComponent):
    """{p} x P1, bidegree (1,0)."""

    kind = "vline"
    __slots__ = ("point",)

    def __init__(self, point: ProjPoint):
        self.point = point

    def parametrize(self, u):
        return (self.point.coords, u)

    def subs(self, mapping):
        return VLine(self.point.subs(mapping))

    def __eq__(self, other):
        return isinstance(other, VLine) and self.point == other.point

    def __hash__(self):
        return hash(("vline", self.point))

    def __str__(self):
        return f"vline {self.point}"

    def __repr__(self):
        return f"VLine({self.point})"


class HLine(CurveComponent):
    """P1 x {q}, bidegree (0,1)."""

    kind = "hline"
    __slots__ = ("point",)

    def __init__(self, point: ProjPoint):
        self.point = point

    def parametrize(self, u):
        return (u, self.point.coords)

    def subs(self, mapping):
        return HLine(self.point.subs(mapping))

    def __eq__(self, other):
        return isinstance(other, HLine) and self.point == other.point

    def __hash__(self):
        return hash(("hline", self.point))

    def __str__(self):
        return f"hline {self.point}"

    def __repr__(self):
        return f"HLine({self.point})"


class Graph(CurveComponent):
    """C_tau = {(p, tau(p))}, bidegree (1,1)."""

    kind = "graph"
    __slots__ = ("mobius",)

    def __init__(self, mobius: Mobius):
        self.mobius = mobius

    def parametrize(self, u):
        return (u, self.mobius.apply_coords(u))

    def subs(self, mapping):
        return Graph(self.mobius.subs(mapping))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.mobius == other.mobius

    def __hash__(self):
        return hash(("graph", self.mobius))

    def __str__(self):
        return f"graph {self.mobius}"

    def __repr__(self):
        return f"Graph({self.mobius})"


def eigen_points(m: Mobius, assumptions: AssumptionSet) -> list[ProjPoint]:
    """Fixed points of a non-scalar Mobius map (adjoining a sqrt if needed)."""
    mat = m.mat
    tr = mat.a + mat.d
    disc = tr * tr - mat.det() * Scalar.rational(4)
    if _decide_zero(disc, assumptions):
        lam = tr * Scalar.rational(1) / Scalar.rational(2)
        return [_eigvec(mat, lam)]
    s = adjoin_sqrt(disc, assumptions)
    half = Scalar.rational(1) / Scalar.rational(2)
    return [_eigvec(mat, (tr + s) * half), _eigvec(mat, (tr - s) * half)]


def _eigvec(mat: LinearMap2, lam: Scalar) -> ProjPoint:
    b, aml = mat.b, lam - mat.a
    if not (b.is_zero() and aml.is_zero()):
        return ProjPoint(b, aml)
    return ProjPoint(lam - mat.d, mat.c)


def intersection_points(c1: CurveComponent, c2: CurveComponent,
                        assumptions: AssumptionSet) -> list:
    """Exact intersection points of two distinct components as coordinate pairs."""
    if isinstance(c1, VLine):
        if isinstance(c2, VLine):
            return []
        if isinstance(c2, HLine):
            return [(c1.point, c2.point)]
        return [(c1.point, c2.mobius.apply(c1.point))]
    if isinstance(c1, HLine):
        if isinstance(c2, VLine):
            return [(c2.point, c1.point)]
        if isinstance(c2, HLine):
            return []
        return [(c2.mobius.inverse().apply(c1.point), c1.point)]
    if isinstance(c2, VLine) or isinstance(c2, HLine):
        return [(p, q) for (p, q) in intersection_points(c2, c1, assumptions)]
    # graph-graph: fixed points of c2^-1 c1
    comp = c2.mobius.inverse().compose(c1.mobius)
    return [(p, c1.mobius.apply(p)) for p in eigen_points(comp, assumptions)]


# ---------------------------------------------------------------------------
# geometric pairs
# ---------------------------------------------------------------------------


class SigmaDatum:
    """Target component index plus the free Mobius datum for hline sources."""

    __slots__ = ("target", "mobius")

    def __init__(self, target: int, mobius: Optional[Mobius] = None):
        self.target = target
        self.mobius = mobius

    def __repr__(self):
        return f"SigmaDatum({self.target}, {self.mobius})"


class GeometricPair:
    """Curve union E plus a piecewise automorphism sigma."""

    def __init__(self, components: Sequence[CurveComponent],
                 sigma: Sequence[SigmaDatum], pattern: str = "",
                 assumptions: AssumptionSet | None = None):
        self.components = tuple(components)
        self.sigma = tuple(sigma)
        self.pattern = pattern
        self.assumptions = assumptions if assumptions is not None else AssumptionSet.empty()
        if len(self.components) != len(self.sigma):
            raise InvalidPair("sigma must assign a datum to every component")

    # -- basic structure

    def component_set(self):
        return sorted((str(c) for c in self.components))

    def same_curve(self, other: "GeometricPair") -> bool:
        return self.component_set() == other.component_set()

    def subs(self, mapping: dict) -> "GeometricPair":
        comps = [c.subs(mapping) for c in self.components]
        sig = [SigmaDatum(d.target, d.mobius.subs(mapping) if d.mobius else None)
               for d in self.sigma]
        return GeometricPair(comps, sig, self.pattern, self.assumptions)

    # -- sigma as a parametrized map

    def sigma_images(self, i: int, u=None):
        """

        Parametrization of the source component i together with its sigma
        image: returns ((p1, p2), (p2', p3)) as coordinate pairs, where
        (p1, p2) runs over the component as u does and (p2', p3) is the
        image point.  p2' equals p2 up to the stored representative.
        """
        if u is None:
            u = fresh_u()
        src = self.components[i]
        datum = self.sigma[i]
        tgt = self.components[datum.target]
        p1, p2 = src.parametrize(u)
        if isinstance(src, VLine):
            if isinstance(tgt, HLine):
                p3 = tgt.point.coords
            elif isinstance(tgt, Graph):
                p3 = tgt.mobius.apply_coords(p2)
            else:
                raise InvalidPair(f"vline cannot map onto {tgt.kind}")
        elif isinstance(src, HLine):
            if not isinstance(tgt, VLine):
                raise InvalidPair(f"hline cannot map onto {tgt.kind}")
            if datum.mobius is None:
                raise InvalidPair("hline source needs a Mobius datum")
            p3 = datum.mobius.apply_coords(p1)
        else:  # Graph source
            if isinstance(tgt, HLine):
                p3 = tgt.point.coords
            elif isinstance(tgt, Graph):
                p3 = tgt.mobius.apply_coords(p2)
            else:
                raise InvalidPair(f"graph cannot map onto {tgt.kind}")
        return (p1, p2), (p2, p3)

    def gamma_triple(self, i: int, u=None):
        """The Gamma parametrization (p, q, (pi2 . sigma)(p, q)) of component i."""
        (p1, p2), (_, p3) = self.sigma_images(i, u)
        return (p1, p2, p3)

    def apply_sigma_point(self, i: int, point, assumptions=None):
        """Image of a concrete point (ProjPoint pair) on component i."""
        A = assumptions if assumptions is not None else self.assumptions
        p, q = point
        src = self.components[i]
        datum = self.sigma[i]
        tgt = self.components[datum.target]
        if isinstance(src, VLine):
            if not src.point.same_point(p, A):
                raise PointNotOnComponent(f"{p},{q} not on {src}")
            if isinstance(tgt, HLine):
                return (q, tgt.point)
            return (q, tgt.mobius.apply(q))
        if isinstance(src, HLine):
            if not src.point.same_point(q, A):
                raise PointNotOnComponent(f"{p},{q} not on {src}")
            return (q, datum.mobius.apply(p))
        if not src.mobius.apply(p).same_point(q, A):
            raise PointNotOnComponent(f"{p},{q} not on {src}")
        if isinstance(tgt, HLine):
            return (q, tgt.point)
        return (q, tgt.mobius.apply(q))


def apply_sigma(pair: GeometricPair, i: int, point, assumptions=None):
    return pair.apply_sigma_point(i, point, assumptions)


def gamma_parametrization(pair: GeometricPair):
    return [pair.gamma_triple(i) for i in range(len(pair.components))]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _typing_ok(pair: GeometricPair, i: int, assumptions: AssumptionSet) -> bool:
    src = pair.components[i]
    datum = pair.sigma[i]
    tgt = pair.components[datum.target]
    if isinstance(src, VLine):
        return isinstance(tgt, (HLine, Graph))
    if isinstance(src, HLine):
        if not isinstance(tgt, VLine):
            return False
        if datum.mobius is None:
            return False
        return tgt.point.same_point(src.point, assumptions)
    return isinstance(tgt, (HLine, Graph))


def is_G_automorphism(pair: GeometricPair, assumptions: AssumptionSet | None = None) -> bool:
    """Check that sigma defines an automorphism of E with pi1 . sigma = pi2.

    Verifies: distinct components, target bijectivity, per-component typing
    (which encodes pi1 . sigma = pi2 and bijectivity onto the target), and
    agreement of the piecewise maps at every intersection point of E.
    """
    A = assumptions if assumptions is not None else pair.assumptions
    n = len(pair.components)
    for i in range(n):
        for j in range(i + 1, n):
            if pair.components[i] == pair.components[j]:
                raise InvalidPair("components must be distinct")
    targets = [d.target for d in pair.sigma]
    if sorted(targets) != list(range(n)):
        return False
    for i in range(n):
        if not _typing_ok(pair, i, A):
            return False
        m = pair.sigma[i].mobius
        if m is not None and A.decide_scalar(m.mat.det()) == "zero":
            return False
    for i in range(n):
        for j in range(i + 1, n):
            for z in intersection_points(pair.components[i], pair.components[j], A):
                im_i = pair.apply_sigma_point(i, z, A)
                im_j = pair.apply_sigma_point(j, z, A)
                if not (im_i[0].same_point(im_j[0], A) and im_i[1].same_point(im_j[1], A)):
                    return False
    return True


def enumerate_sigma_candidates(components: Sequence[CurveComponent],
                               assumptions: AssumptionSet | None = None):
    """All target bijections passing the structural typing rules.

    Horizontal-line sources get an identity Mobius placeholder; callers that
    need the full family replace it.  Used by the no-automorphism probes.
    """
    import itertools

    A = assumptions if assumptions is not None else AssumptionSet.empty()
    n = len(components)
    out = []
    for perm in itertools.permutations(range(n)):
        sigma = []
        ok = True
        for i, t in enumerate(perm):
            datum = SigmaDatum(t, Mobius.identity() if isinstance(components[i], HLine) else None)
            sigma.append(datum)
        cand = GeometricPair(components, sigma)
        for i in range(n):
            if not _typing_ok(cand, i, A):
                ok = False
                break
        if ok:
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------


def transport(pair: GeometricPair, t1: Mobius, t2: Mobius) -> GeometricPair:
    """Move the pair by (t1 x t2).

    Components always transport; sigma data conjugates only in the
    2-equivalence case t1 == t2 (for t1 != t2 the conjugate of sigma is no
    longer compatible with pi1 . sigma = pi2, so sigma is dropped and the
    result only carries the curve).
    """
    comps = []
    for c in pair.components:
        if isinstance(c, VLine):
            comps.append(VLine(t1.apply(c.point)))
        elif isinstance(c, HLine):
            comps.append(HLine(t2.apply(c.point)))
        else:
            comps.append(Graph(t2.compose(c.mobius).compose(t1.inverse())))
    if t1 == t2:
        sigma = []
        for d in pair.sigma:
            m = None
            if d.mobius is not None:
                m = t1.compose(d.mobius).compose(t1.inverse())
            sigma.append(SigmaDatum(d.target, m))
        return GeometricPair(comps, sigma, pair.pattern, pair.assumptions)
    sigma = [SigmaDatum(d.target, None) for d in pair.sigma]
    out = GeometricPair(comps, sigma, pair.pattern, pair.assumptions)
    out.sigma_dropped = True
    return out


# ---------------------------------------------------------------------------
# catalogs
# ---------------------------------------------------------------------------

TYPE_TAGS = ("S'", "T'1", "T'2", "FL")


def _tag(type_tag: str) -> str:
    t = type_tag.replace("′", "'")
    if t not in TYPE_TAGS:
        raise UnknownType(f"unknown type tag {type_tag!r} (expected one of {TYPE_TAGS})")
    return t


def catalog_E(type_tag: str) -> list[CurveComponent]:
    """Normal-form component lists of the reduced non-integral curve types.

    The T'1 graph parameter is named ``delta`` so that the derived relation
    table comes out in the same letters as the catalog tables.
    """
    t = _tag(type_tag)
    if t == "S'":
        return [HLine(P_POINT), VLine(P_POINT), Graph(Mobius.of_rationals(0, 1, 1, 0))]
    if t == "T'1":
        delta = declare_parameter("delta")
        tau = Mobius(LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), delta))
        return [HLine(P_POINT), VLine(P_POINT), Graph(tau)]
    if t == "T'2":
        return [HLine(P_POINT), VLine(P_POINT), Graph(Mobius.of_rationals(1, 1, 0, 1))]
    return [HLine(P_POINT), HLine(Q_POINT), VLine(P_POINT), VLine(Q_POINT)]


def catalog_sigma(type_tag: str) -> list[GeometricPair]:
    """Every automorphism family of the catalog curves, with its constraints.

    Component order: the catalog_E order.  Pattern tags: "<type>(i)" keeps
    the graph component fixed (or fixes all four lines of the quadrangle set
    pointwise in the appropriate sense); "<type>(ii)" is the branch that
    rotates the vertical line into the graph.
    """
    t = _tag(type_tag)
    alpha = declare_parameter("alpha")
    beta = declare_parameter("beta")
    gamma = declare_parameter("gamma")
    one, zero = Scalar.one(), Scalar.zero()
    if t == "S'":
        comps = catalog_E(t)
        tau_alpha = Mobius(LinearMap2(one, zero, zero, alpha))
        mu_alpha = Mobius(LinearMap2(zero, one, alpha, zero))
        fam1 = GeometricPair(
            comps,
            [SigmaDatum(1, tau_alpha), SigmaDatum(0), SigmaDatum(2)],
            "S'(i)",
            AssumptionSet.empty().assuming_nonzero(alpha),
        )
        fam2 = GeometricPair(
            comps,
            [SigmaDatum(1, mu_alpha), SigmaDatum(2), SigmaDatum(0)],
            "S'(ii)",
            AssumptionSet.empty().assuming_nonzero(alpha),
        )
        return [fam1, fam2]
    if t in ("T'1", "T'2"):
        # sigma datum (1 alpha; 0 gamma): alpha is the free table parameter,
        # gamma the pivot variable of the dimension case split
        comps = catalog_E(t)
        tbg = Mobius(LinearMap2(one, alpha, zero, gamma))
        base = AssumptionSet.empty().assuming_nonzero(gamma)
        if t == "T'1":
            delta = declare_parameter("delta")
            base = base.assuming_nonzero(delta)
        fam1 = GeometricPair(
            comps, [SigmaDatum(1, tbg), SigmaDatum(0), SigmaDatum(2)], f"{t}(i)", base)
        fam2 = GeometricPair(
            comps, [SigmaDatum(1, tbg), SigmaDatum(2), SigmaDatum(0)], f"{t}(ii)", base)
        return [fam1, fam2]
    comps = catalog_E(t)
    tau_a = Mobius(LinearMap2(one, zero, zero, alpha))
    tau_b = Mobius(LinearMap2(one, zero, zero, beta))
    mu_a = Mobius(LinearMap2(zero, one, alpha, zero))
    mu_b = Mobius(LinearMap2(zero, one, beta, zero))
    ab = AssumptionSet.empty().assuming_nonzero(alpha * beta)
    fam1 = GeometricPair(
        comps,
        [SigmaDatum(2, tau_a), SigmaDatum(3, tau_b), SigmaDatum(0), SigmaDatum(1)],
        "FL(i)", ab)
    fam2 = GeometricPair(
        comps,
        [SigmaDatum(2, mu_a), SigmaDatum(3, mu_b), SigmaDatum(1), SigmaDatum(0)],
        "FL(ii)", ab)
    return [fam1, fam2]


# ---------------------------------------------------------------------------
# pair-spec text format
# ---------------------------------------------------------------------------

PAIR_SPEC_DOC = """\
Pair-spec format (one declaration per line, '#' comments):
    param NAME                         declare a parameter symbol
    assume EXPR                        record EXPR != 0
    component LABEL vline [p0,p1]
    component LABEL hline [q0,q1]
    component LABEL graph [[a,b],[c,d]]
    sigma SRC -> DST                   forced map (vline/graph sources)
    sigma SRC -> DST [[a,b],[c,d]]     hline sources carry a Mobius datum
"""


def parse_pair_spec(text: str) -> GeometricPair:
    """Parse the declarative pair description used by the CLI."""
    labels: dict[str, int] = {}
    comps: list[CurveComponent] = []
    sigma_lines: list[tuple[str, str, Optional[str]]] = []
    assumptions = AssumptionSet.empty()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        head = parts[0]
        if head == "param":
            declare_parameter(parts[1])
        elif head == "assume":
            expr = line[len("assume"):].strip()
            assumptions = assumptions.assuming_nonzero(exprparse.parse_scalar(expr))
        elif head == "component":
            if len(parts) < 3:
                raise InvalidPair(f"line {ln}: malformed component declaration")
            label = parts[1]
            kind, _, payload = parts[2].partition(" ")
            payload = payload.strip()
            if label in labels:
                raise InvalidPair(f"line {ln}: duplicate label {label!r}")
            if kind == "vline":
                comps.append(VLine(ProjPoint(*exprparse.parse_point(payload))))
            elif kind == "hline":
                comps.append(HLine(ProjPoint(*exprparse.parse_point(payload))))
            elif kind == "graph":
                comps.append(Graph(Mobius(exprparse.parse_matrix(payload))))
            else:
                raise InvalidPair(f"line {ln}: unknown component kind {kind!r}")
            labels[label] = len(comps) - 1
        elif head == "sigma":
            body = line[len("sigma"):].strip()
            if "->" not in body:
                raise InvalidPair(f"line {ln}: sigma needs 'SRC -> DST'")
            src, _, rest = body.partition("->")
            rest = rest.strip()
            dst, _, matrix = rest.partition(" ")
            sigma_lines.append((src.strip(), dst.strip(), matrix.strip() or None))
        else:
            raise InvalidPair(f"line {ln}: unknown directive {head!r}")
    sigma: list[Optional[SigmaDatum]] = [None] * len(comps)
    for src, dst, matrix in sigma_lines:
        if src not in labels or dst not in labels:
            raise InvalidPair(f"unknown component label in sigma {src} -> {dst}")
        m = Mobius(exprparse.parse_matrix(matrix)) if matrix else None
        sigma[labels[src]] = SigmaDatum(labels[dst], m)
    if any(d is None for d in sigma):
        raise InvalidPair("every component needs a sigma assignment")
    return GeometricPair(comps, sigma, "pair-spec", assumptions)
