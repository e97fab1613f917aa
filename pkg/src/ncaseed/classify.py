"""Isomorphism and Morita classification of the catalog algebra families.

The geometric criterion drives everything: two presentations are isomorphic
iff some projective transformation rho maps one pair onto the other with
sigma' . (rho x rho) = (rho x rho) . sigma, and graded Morita equivalent iff
a Z-indexed sequence rho_i does the same with indices shifted by one.  The
isomorphism solver only searches the finitely many stabilizer shapes of the
normal-form curves; the resulting polynomial systems are tiny and solved by
elimination, adjoining a square root when a quadratic demands one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from . import g2solver, linalg, segre, superpot
from .errors import (
    CaseSplitRequired,
    InvalidSequence,
    NcaseedError,
    TypeMismatch,
    UnknownType,
    ZeroDivisionScalar,
)
from .exprparse import parse_ncpoly
from .freealg import LinearMap2, coefficient_rows
from .geometry import (
    GeometricPair,
    Graph,
    HLine,
    Mobius,
    P_POINT,
    Q_POINT,
    SigmaDatum,
    VLine,
    catalog_sigma,
    fresh_u,
    transport,
)
from .scalars import (
    AssumptionSet,
    Poly,
    Scalar,
    adjoin_sqrt,
    declare_parameter,
    poly_primitive,
)

INDEX_SYMBOL = "idx"


def _merge(a: AssumptionSet, b: AssumptionSet) -> AssumptionSet:
    out = a
    for p in b.nonzero:
        out = out.assuming_nonzero(Scalar(p, Poly.const(1)))
    return AssumptionSet(out.nonzero, a.bindings + b.bindings)


def _sc(v) -> Scalar:
    return v if isinstance(v, Scalar) else Scalar.rational(v)


# ---------------------------------------------------------------------------
# commuting diagrams
# ---------------------------------------------------------------------------


def _sigma_second(pair: GeometricPair, i: int, w1, w2):
    """Second coordinate of sigma at the symbolic point (w1, w2) on component i."""
    src = pair.components[i]
    datum = pair.sigma[i]
    tgt = pair.components[datum.target]
    if isinstance(src, VLine):
        if isinstance(tgt, HLine):
            return tgt.point.coords
        return tgt.mobius.apply_coords(w2)
    if isinstance(src, HLine):
        return datum.mobius.apply_coords(w1)
    if isinstance(tgt, HLine):
        return tgt.point.coords
    return tgt.mobius.apply_coords(w2)


def commuting_residuals(pair_a: GeometricPair, pair_b: GeometricPair,
                        r0: Mobius, r1: Mobius, r2: Mobius,
                        match: list[int]) -> list[Scalar]:
    """Cross products that vanish iff sigma_b . (r0 x r1) = (r1 x r2) . sigma_a.

    match[i] is the pair_b component carrying the (r0 x r1)-image of
    pair_a's component i.
    """
    out = []
    for i, j in enumerate(match):
        u = fresh_u()
        z1, z2 = pair_a.components[i].parametrize(u)
        sa = _sigma_second(pair_a, i, z1, z2)
        w1 = r0.apply_coords(z1)
        w2 = r1.apply_coords(z2)
        sb = _sigma_second(pair_b, j, w1, w2)
        rhs = r2.apply_coords(sa)
        out.append(sb[0] * rhs[1] - sb[1] * rhs[0])
    return out


def _match_components(transported: GeometricPair, target: GeometricPair) -> Optional[list[int]]:
    match = []
    for c in transported.components:
        hit = None
        for j, d in enumerate(target.components):
            if c == d:
                hit = j
                break
        if hit is None:
            return None
        match.append(hit)
    return match


def commuting_check(pair_a: GeometricPair, pair_b: GeometricPair,
                    r0: Mobius, r1: Mobius, r2: Mobius) -> bool:
    """Full symbolic check of the shifted commuting square for concrete maps."""
    moved = transport(pair_a, r0, r1)
    match = _match_components(moved, pair_b)
    if match is None:
        return False
    return all(r.is_zero() for r in commuting_residuals(pair_a, pair_b, r0, r1, r2, match))


# ---------------------------------------------------------------------------
# stabilizers of the normal-form curves
# ---------------------------------------------------------------------------

STABILIZER_SHAPES = {
    # shape key -> list of (rho builder, unknown names, unknowns assumed nonzero)
    "C_id": [(lambda u: LinearMap2(Scalar.one(), u["wb"], Scalar.zero(), u["wd"]),
              ("wb", "wd"), ("wd",))],
    "C_tau11": [(lambda u: LinearMap2(Scalar.one(), u["wb"], Scalar.zero(), Scalar.one()),
                 ("wb",), ())],
    "quadrangle": [
        (lambda u: LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), u["wd"]),
         ("wd",), ("wd",)),
        (lambda u: LinearMap2(Scalar.zero(), Scalar.one(), u["wc"], Scalar.zero()),
         ("wc",), ("wc",)),
    ],
}

_SHAPE_OF_TYPE = {"T'1": "C_id", "T'2": "C_tau11", "FL1": "quadrangle", "FL2": "quadrangle"}


def stabilizer_family(type_tag: str):
    """The 2-equivalence stabilizer families of the normal-form curves.

    Accepts a curve-shape key ("C_id", "C_tau11", "quadrangle") or an algebra
    type that maps onto one.  Each returned matrix has symbolic entries; the
    families are re-verified against transport(E, rho, rho) = E.
    """
    key = type_tag if type_tag in STABILIZER_SHAPES else _SHAPE_OF_TYPE.get(type_tag)
    if key is None:
        raise UnknownType(f"no stabilizer catalog for {type_tag!r}")
    beta = declare_parameter("beta")
    gamma = declare_parameter("gamma")
    delta = declare_parameter("delta")
    display = {
        "C_id": [LinearMap2(Scalar.one(), beta, Scalar.zero(), delta)],
        "C_tau11": [LinearMap2(Scalar.one(), beta, Scalar.zero(), Scalar.one())],
        "quadrangle": [
            LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), delta),
            LinearMap2(Scalar.zero(), Scalar.one(), gamma, Scalar.zero()),
        ],
    }[key]
    curve = {
        "C_id": [HLine(P_POINT), VLine(P_POINT), Graph(Mobius.identity())],
        "C_tau11": [HLine(P_POINT), VLine(P_POINT), Graph(Mobius.of_rationals(1, 1, 0, 1))],
        "quadrangle": [HLine(P_POINT), HLine(Q_POINT), VLine(P_POINT), VLine(Q_POINT)],
    }[key]
    skeleton = GeometricPair(curve, [SigmaDatum(i) for i in range(len(curve))])
    for mat in display:
        rho = Mobius(mat)
        moved = transport(skeleton, rho, rho)
        if not moved.same_curve(skeleton):
            raise NcaseedError(f"stabilizer family {mat} does not preserve the curve")
    return display


# ---------------------------------------------------------------------------
# algebra instances
# ---------------------------------------------------------------------------

# geometric presentations:
# type -> (catalog family, fixed bindings, free params, params required nonzero)
_GEOMETRIC_TYPES = {
    "S'": ("S'", 0, {"alpha": Fraction(-1)}, (), ()),
    "T'1": ("T'1", 0, {"delta": Fraction(1), "gamma": Fraction(1)}, ("alpha",), ("alpha",)),
    "T'2": ("T'2", 0, {"gamma": Fraction(1)}, ("alpha",), ()),
    "FL1": ("FL", 0, {}, ("alpha",), ()),  # beta bound to -alpha below
    "FL2": ("FL", 1, {}, ("alpha", "beta"), ()),
}


class AlgebraInstance:
    """A catalog algebra with rational (or symbolic) parameter values."""

    def __init__(self, type_tag: str, bindings: Optional[dict] = None):
        tag = type_tag.replace("′", "'")
        self.type_tag = tag
        self.bindings = {k: _sc(v) for k, v in (bindings or {}).items()}
        if tag in _GEOMETRIC_TYPES:
            cat_tag, fam_idx, fixed, free, required = _GEOMETRIC_TYPES[tag]
            mapping = {k: _sc(v) for k, v in fixed.items()}
            for name in free:
                if name not in self.bindings:
                    raise TypeMismatch(f"type {tag} needs a value for {name!r}")
                mapping[name] = self.bindings[name]
            if tag == "FL1":
                mapping["beta"] = -mapping["alpha"]
            fam = catalog_sigma(cat_tag)[fam_idx]
            constraints = list(fam.assumptions.nonzero)
            for name in required:
                constraints.append(Poly.var(name))
            leftover = AssumptionSet.empty()
            for p in constraints:
                val = p.subs(mapping)
                if val.is_zero():
                    raise TypeMismatch(
                        f"bindings violate the {tag} condition {p} != 0")
                if not val.is_rational():
                    leftover = leftover.assuming_nonzero(val)
            pair = fam.subs(mapping)
            self.pair = GeometricPair(pair.components, pair.sigma, fam.pattern, leftover)
        else:
            self.pair = None

    def params(self) -> dict:
        return dict(self.bindings)

    def __repr__(self):
        vals = ", ".join(f"{k}={v}" for k, v in self.bindings.items())
        return f"AlgebraInstance({self.type_tag}; {vals})"


# ---------------------------------------------------------------------------
# the projective-equation solver behind iso_condition
# ---------------------------------------------------------------------------


class ShapeSolution:
    """Outcome of solving one stabilizer shape.

    conditions: polynomials in the instance parameters that must vanish.
    witness: a verified Mobius map when the parameters are concrete enough,
    else None.
    """

    def __init__(self, conditions: list[Poly], witness: Optional[Mobius]):
        self.conditions = conditions
        self.witness = witness


def _poly_equations(residuals: list[Scalar]) -> list[Poly]:
    eqs = []
    for r in residuals:
        if r.is_zero():
            continue
        num = r.num
        # split off u-coefficients
        buckets: dict = {}
        for mono, c in num.t.items():
            d = dict(mono)
            key = (d.pop("u0", 0), d.pop("u1", 0))
            rest = tuple(sorted(d.items()))
            buckets.setdefault(key, {})[rest] = c
        for terms in buckets.values():
            p = poly_primitive(Poly(terms))
            if not p.is_zero() and p not in eqs:
                eqs.append(p)
    return eqs


def _strip_known(p: Poly, asmp: AssumptionSet) -> Poly:
    from .scalars import _nonzero_factors  # factors of a primitive polynomial

    out = Poly.const(1)
    for f in _nonzero_factors(p):
        if asmp.decide(f) != "nonzero":
            out = out * f
    return poly_primitive(out) if not out.is_const() else out


def solve_poly_system(eqs: list[Poly], unknowns, unknown_nonzero,
                      asmp: AssumptionSet):
    """Eliminate unknowns from a small polynomial system.

    Handles unknowns appearing linearly (with a decided-nonzero,
    unknown-free leading coefficient) and pure squares v**2 = value, where a
    square root is adjoined.  Returns (conditions, solution, remaining) with
    ``conditions`` the parameter polynomials that must vanish, or None if
    the system is contradictory outright.
    """
    work = asmp
    for name in unknown_nonzero:
        work = work.assuming_nonzero(Scalar.param(name))
    solution: dict[str, Scalar] = {}
    remaining = set(unknowns)
    eqs = [e for e in eqs if not e.is_zero()]

    def substitute_all(mapping, current):
        return [q for q in (poly_primitive(e.subs(mapping).num) for e in current)
                if not q.is_zero()]

    progress = True
    while progress and eqs:
        progress = False
        for e in list(eqs):
            e = _strip_known(e, work)
            if e.is_const():
                continue
            free_here = [v for v in remaining if v in e.symbols()]
            for v in sorted(free_here):
                if e.degree_in(v) != 1:
                    continue
                lead, rest = Poly({}), Poly({})
                for mono, c in e.t.items():
                    d = dict(mono)
                    ex = d.pop(v, 0)
                    stripped = tuple(sorted(d.items()))
                    if ex:
                        lead = lead + Poly({stripped: c})
                    else:
                        rest = rest + Poly({stripped: c})
                if any(s in remaining for s in lead.symbols()):
                    continue
                if work.decide(lead) != "nonzero":
                    continue
                val = Scalar(-rest, lead)
                if v in unknown_nonzero and val.is_zero():
                    return None
                solution[v] = val
                remaining.discard(v)
                eqs = substitute_all({v: val}, eqs)
                for k in list(solution):
                    solution[k] = solution[k].subs({v: val})
                progress = True
                break
            if progress:
                break
            for v in sorted(free_here):
                if e.degree_in(v) != 2 or len(free_here) != 1:
                    continue
                lead, rest = Poly({}), Poly({})
                odd = False
                for mono, c in e.t.items():
                    d = dict(mono)
                    ex = d.pop(v, 0)
                    stripped = tuple(sorted(d.items()))
                    if ex == 2:
                        lead = lead + Poly({stripped: c})
                    elif ex == 0:
                        rest = rest + Poly({stripped: c})
                    else:
                        odd = True
                if odd or work.decide(lead) != "nonzero":
                    continue
                sq = Scalar(-rest, lead)
                if sq.is_zero():
                    if v in unknown_nonzero:
                        return None
                    root = Scalar.zero()
                else:
                    try:
                        root = adjoin_sqrt(sq, work)
                    except NcaseedError:
                        return None
                solution[v] = root
                remaining.discard(v)
                eqs = substitute_all({v: root}, eqs)
                for k in list(solution):
                    solution[k] = solution[k].subs({v: root})
                progress = True
                break
            if progress:
                break

    conditions = []
    for e in eqs:
        e = _strip_known(e, work)
        if e.is_zero():
            continue
        if e.is_const():
            return None
        if any(v in remaining for v in e.symbols()):
            raise CaseSplitRequired(e, "unsolved witness unknowns")
        if e not in conditions:
            conditions.append(e)
    return conditions, solution, remaining


def _solve_shape(pair_a, pair_b, builder, unknowns, unknown_nonzero,
                 match, asmp: AssumptionSet) -> Optional[ShapeSolution]:
    """Solve sigma_b . (rho x rho) = (rho x rho) . sigma_a over one shape."""
    for name in unknowns:
        declare_parameter(name)
    uvals = {name: Scalar.param(name) for name in unknowns}
    rho_mat = builder(uvals)
    residuals = commuting_residuals(pair_a, pair_b, Mobius(rho_mat), Mobius(rho_mat),
                                    Mobius(rho_mat), match)
    eqs = _poly_equations(residuals)
    solved = solve_poly_system(eqs, unknowns, unknown_nonzero, asmp)
    if solved is None:
        return None
    conditions, solution, remaining = solved
    witness = None
    if not conditions:
        witness = _assemble_witness(pair_a, pair_b, builder, unknowns, unknown_nonzero,
                                    solution, remaining, match, asmp)
        if witness is None:
            return None
    return ShapeSolution(conditions, witness)


def _assemble_witness(pair_a, pair_b, builder, unknowns, unknown_nonzero,
                      solution, remaining, match, asmp) -> Optional[Mobius]:
    for fill in (1, 2, 3, -1, 5):
        vals = {}
        ok = True
        for name in unknowns:
            if name in solution:
                vals[name] = solution[name]
            else:
                vals[name] = Scalar.rational(fill if name in unknown_nonzero else 0)
        try:
            mat = builder(vals)
            if mat.det().is_zero():
                ok = False
            else:
                rho = Mobius(mat)
                residuals = commuting_residuals(pair_a, pair_b, rho, rho, rho, match)
                ok = all(r.is_zero() for r in residuals)
        except (ZeroDivisionScalar, NcaseedError):
            ok = False
        if ok:
            return rho
    return None


def _shape_matches(pair_a, shape_key):
    """Component match under each stabilizer shape (fixed by the shape)."""
    comps = pair_a.components
    if shape_key in ("C_id", "C_tau11"):
        return [list(range(len(comps)))]
    # quadrangle: diag fixes all lines; antidiag swaps P and Q lines
    identity = list(range(len(comps)))
    swap = []
    for c in comps:
        p = c.point
        target = Q_POINT if p == P_POINT else P_POINT
        for j, d in enumerate(comps):
            if type(d) is type(c) and d.point == target:
                swap.append(j)
                break
    return [identity, swap]


class IsoResult:
    def __init__(self, isomorphic: bool, witness: Optional[Mobius],
                 conditions: list[list[Poly]]):
        self.isomorphic = isomorphic
        self.witness = witness
        self.conditions = conditions  # one list of polynomials per shape

    def __bool__(self):
        return self.isomorphic


def solve_iso_geometric(a: AlgebraInstance, b: AlgebraInstance) -> IsoResult:
    """Stabilizer-shape search for the geometric types."""
    if a.type_tag != b.type_tag:
        raise TypeMismatch("solve_iso_geometric needs equal types")
    shape_key = _SHAPE_OF_TYPE.get(a.type_tag, "C_id" if a.type_tag == "T'1" else None)
    if a.type_tag == "S'":
        # parameter-free presentation: identical instances
        return IsoResult(True, Mobius.identity(), [[]])
    if shape_key is None:
        raise UnknownType(f"no geometric iso solver for {a.type_tag}")
    asmp = _merge(a.pair.assumptions, b.pair.assumptions)
    shapes = STABILIZER_SHAPES[shape_key]
    matches = _shape_matches(a.pair, shape_key)
    all_conditions = []
    # shape k moves components along matches[k]
    results = []
    for k, (builder, unknowns, nz) in enumerate(shapes):
        match = matches[k if k < len(matches) else 0]
        sol = _solve_shape(a.pair, b.pair, builder, unknowns, nz, match, asmp)
        results.append(sol)
    witness = None
    sat = False
    for sol in results:
        if sol is None:
            all_conditions.append(None)
            continue
        all_conditions.append(sol.conditions)
        if not sol.conditions and sol.witness is not None and not sat:
            sat = True
            witness = sol.witness
    conditions = [c for c in all_conditions if c is not None]
    return IsoResult(sat, witness, conditions)


# cache of solver-derived symbolic conditions per geometric type; each entry
# is a list (one per stabilizer shape) of polynomial lists in the symbols
# alpha/beta (left instance) and alphap/betap (right instance)
_CONDITION_CACHE: dict = {}


def _derived_conditions(tag: str):
    if tag not in _CONDITION_CACHE:
        _declare_row_params()
        ap = declare_parameter("alphap")
        bp = declare_parameter("betap")
        al, be = Scalar.param("alpha"), Scalar.param("beta")
        if tag == "T'1":
            a = AlgebraInstance("T'1", {"alpha": al})
            b = AlgebraInstance("T'1", {"alpha": ap})
        elif tag == "T'2":
            a = AlgebraInstance("T'2", {"alpha": al})
            b = AlgebraInstance("T'2", {"alpha": ap})
        elif tag == "FL1":
            a = AlgebraInstance("FL1", {"alpha": al})
            b = AlgebraInstance("FL1", {"alpha": ap})
        elif tag == "FL2":
            a = AlgebraInstance("FL2", {"alpha": al, "beta": be})
            b = AlgebraInstance("FL2", {"alpha": ap, "beta": bp})
        else:
            raise UnknownType(tag)
        res = solve_iso_geometric(a, b)
        _CONDITION_CACHE[tag] = res.conditions
    return _CONDITION_CACHE[tag]


def _conditions_satisfied(tag: str, a: "AlgebraInstance", b: "AlgebraInstance") -> bool:
    """Evaluate the cached solver-derived conditions at concrete bindings."""
    mapping = {}
    for k, v in a.bindings.items():
        mapping[k] = v
    for k, v in b.bindings.items():
        mapping[k + "p"] = v
    for shape_conditions in _derived_conditions(tag):
        if all(p.subs(mapping).is_zero() for p in shape_conditions):
            return True
    return False


# closed-form isomorphism conditions, straight from the catalog tables
def _closed_iso(tag: str, pa: dict, pb: dict) -> bool:
    a = {k: v.as_fraction() if v.is_rational() else v for k, v in pa.items()}
    b = {k: v.as_fraction() if v.is_rational() else v for k, v in pb.items()}
    if tag in ("P2", "T2", "S'", "T'1", "TWL", "WL2"):
        return True
    if tag in ("P1", "WL1"):
        return b["alpha"] in (a["alpha"], 1 / a["alpha"])
    if tag == "S1":
        return {b["alpha"], b["beta"]} in ({a["alpha"], a["beta"]},
                                           {1 / a["alpha"], 1 / a["beta"]})
    if tag == "S2":
        r, rp = a["alpha"] / a["beta"], b["alpha"] / b["beta"]
        return rp in (r, 1 / r)
    if tag == "T1":
        return b["beta"] in (a["beta"], -a["beta"])
    if tag == "T'2":
        return b["alpha"] == a["alpha"]
    if tag == "FL1":
        return b["alpha"] in (a["alpha"], -1 / a["alpha"])
    if tag == "FL2":
        return b["alpha"] * a["beta"] == a["alpha"] * b["beta"]
    raise UnknownType(f"no isomorphism condition for {tag!r}")


def iso_condition(a: AlgebraInstance, b: AlgebraInstance,
                  want_witness: bool = True) -> IsoResult:
    """Graded-isomorphism test; cross-type is always false.

    For the geometric types the verdict comes from the solver-derived
    stabilizer-shape conditions (computed symbolically once per type) and is
    cross-checked against the closed-form catalog condition; a verified
    witness map is produced for positive concrete instances.  Other types
    evaluate the catalog condition directly.
    """
    if a.type_tag != b.type_tag:
        return IsoResult(False, None, [])
    closed = _closed_iso(a.type_tag, a.params(), b.params())
    if a.type_tag not in _GEOMETRIC_TYPES:
        return IsoResult(closed, None, [])
    if a.type_tag == "S'":
        return IsoResult(True, Mobius.identity(), [[]])
    derived = _conditions_satisfied(a.type_tag, a, b)
    if derived != closed:
        raise NcaseedError(
            f"solver/closed-form disagreement for {a.type_tag}: "
            f"solver={derived} closed={closed}")
    witness = None
    if derived and want_witness:
        solved = solve_iso_geometric(a, b)
        if not bool(solved):
            raise NcaseedError(
                f"witness search failed for {a.type_tag} despite satisfied conditions")
        witness = solved.witness
    return IsoResult(derived, witness, _derived_conditions(a.type_tag))


# ---------------------------------------------------------------------------
# Morita conditions and sequences
# ---------------------------------------------------------------------------

_MORITA_FAMILY = {
    "P": "P", "P1": "P", "P2": "P",
    "S": "S", "S1": "S", "S2": "S",
    "T": "T", "T1": "T", "T2": "T",
    "S'": "S'",
    "T'": "T'", "T'1": "T'", "T'2": "T'",
    "FL": "FL", "FL1": "FL", "FL2": "FL",
    "WL": "WL", "WL1": "WL", "WL2": "WL",
    "TWL": "TWL",
}


def _fl_normal_params(inst: AlgebraInstance):
    """Parameters of the FL Morita normal form (the FL2 presentation)."""
    if inst.type_tag == "FL2":
        return inst.bindings["alpha"], inst.bindings["beta"]
    if inst.type_tag == "FL1":
        return Scalar.rational(1), Scalar.rational(-1)
    raise TypeMismatch(f"{inst.type_tag} is not an FL presentation")


def morita_condition(a: AlgebraInstance, b: AlgebraInstance) -> bool:
    """Graded Morita equivalence at the coarse (merged-type) granularity."""
    fam_a = _MORITA_FAMILY.get(a.type_tag)
    fam_b = _MORITA_FAMILY.get(b.type_tag)
    if fam_a is None or fam_b is None:
        raise UnknownType(f"no Morita family for {a.type_tag!r}/{b.type_tag!r}")
    if fam_a != fam_b:
        return False
    if fam_a == "S":
        r = a.bindings["alpha"] / a.bindings["beta"]
        rp = b.bindings["alpha"] / b.bindings["beta"]
        return rp == r or rp == r.inverse()
    if fam_a == "FL":
        aa, ab = _fl_normal_params(a)
        ba, bb = _fl_normal_params(b)
        same = (ba * ab - bb * aa).is_zero()
        swapped = (ba * aa - bb * ab).is_zero() if not (aa.is_zero() or ab.is_zero()) \
            else (ba * aa == bb * ab)
        return same or swapped
    return True


class MobiusSequence:
    """Z-indexed sequence of Mobius maps, presented per residue class.

    ``offsets(r)`` returns symbolic representatives (rho_i, rho_{i+1},
    rho_{i+2}) valid for every index i in residue class r; entries may
    involve the reserved index symbol ``idx`` or an auxiliary geometric
    symbol (e.g. nu standing for alpha**-n in the even/odd sequences).
    """

    def __init__(self, period: int, offsets_fn: Callable[[int], tuple],
                 assumptions: AssumptionSet | None = None,
                 description: str = ""):
        if period <= 0:
            raise InvalidSequence("period must be positive")
        self.period = period
        self._fn = offsets_fn
        self.assumptions = assumptions if assumptions is not None else AssumptionSet.empty()
        self.description = description

    def offsets(self, r: int):
        return self._fn(r % self.period)

    @staticmethod
    def from_index_formula(mat: LinearMap2, assumptions=None, description=""):
        """Period-1 sequence rho_i = mat(idx := i)."""
        declare_parameter(INDEX_SYMBOL)

        def fn(_r):
            out = []
            for o in range(3):
                shift = {INDEX_SYMBOL: Scalar.param(INDEX_SYMBOL) + Scalar.rational(o)}
                out.append(Mobius(mat.subs(shift)))
            return tuple(out)

        return MobiusSequence(1, fn, assumptions, description)

    @staticmethod
    def from_cycle(mats: list[LinearMap2], assumptions=None, description=""):
        """Periodic sequence rho_i = mats[i mod len(mats)]."""
        period = len(mats)

        def fn(r):
            return tuple(Mobius(mats[(r + o) % period]) for o in range(3))

        return MobiusSequence(period, fn, assumptions, description)

    def check_invertible(self):
        for r in range(self.period):
            m0 = self.offsets(r)[0]
            det = m0.mat.det()
            if det.is_zero():
                raise InvalidSequence(f"entry at residue {r} is singular")
            num = det.num
            if INDEX_SYMBOL in num.symbols():
                from .scalars import _find_rational_root
                root = _find_rational_root(num, INDEX_SYMBOL)
                if root is not None and root.denominator == 1:
                    raise InvalidSequence(
                        f"entry determinant vanishes at integer index {root}")
            elif self.assumptions.decide(num) == "zero":
                raise InvalidSequence(f"entry at residue {r} is singular")


def verify_morita_sequence(a: AlgebraInstance, b: AlgebraInstance,
                           seq: MobiusSequence) -> bool:
    """Symbolically verify the shifted commuting squares for every residue."""
    if a.pair is None or b.pair is None:
        raise TypeMismatch("verify_morita_sequence needs geometric presentations")
    seq.check_invertible()
    for r in range(seq.period):
        r0, r1, r2 = seq.offsets(r)
        if not commuting_check(a.pair, b.pair, r0, r1, r2):
            return False
    return True


# the four reference sequences
def proof_sequences():
    """The bridging sequences used by the Morita classification proofs.

    Returns a list of (name, instance_a, instance_b, sequence).
    """
    declare_parameter(INDEX_SYMBOL)
    alpha = declare_parameter("alpha")
    beta = declare_parameter("beta")
    gamma = declare_parameter("gamma")
    nu = declare_parameter("nu")
    idx = Scalar.param(INDEX_SYMBOL)
    half = Scalar.rational(Fraction(1, 2))
    out = []

    # T'1 normal form -> T'2 at alpha = 0, rho_i = (1, -i/2; 0, -1/2)
    a = AlgebraInstance("T'1", {"alpha": 1})
    b = AlgebraInstance("T'2", {"alpha": 0})
    mat = LinearMap2(Scalar.one(), -idx * half, Scalar.zero(), -half)
    out.append(("T'1 -> T'2(0)", a, b,
                MobiusSequence.from_index_formula(mat, description="rho_i = (1, -i/2; 0, -1/2)")))

    # T'2(alpha) -> T'2(0), rho_i = (1, -i alpha/2; 0, -(alpha-2)/2)
    asym = AlgebraInstance("T'2", {"alpha": alpha})
    b0 = AlgebraInstance("T'2", {"alpha": 0})
    cond = AssumptionSet.empty().assuming_nonzero(alpha - Scalar.rational(2))
    mat2 = LinearMap2(Scalar.one(), -idx * alpha * half,
                      Scalar.zero(), -(alpha - Scalar.rational(2)) * half)
    out.append(("T'2(alpha) -> T'2(0)", asym, b0,
                MobiusSequence.from_index_formula(mat2, cond,
                                                  "rho_i = (1, -i*alpha/2; 0, -(alpha-2)/2)")))

    # FL1(alpha) -> FL1(1): rho_{2n} = rho_{2n+1} = diag(1, alpha^-n)
    afl = AlgebraInstance("FL1", {"alpha": alpha})
    bfl = AlgebraInstance("FL1", {"alpha": 1})
    nz = AssumptionSet.empty().assuming_nonzero(alpha).assuming_nonzero(nu)

    def fl1_offsets(r):
        dn = LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), nu)
        dn1 = LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), nu / alpha)
        if r == 0:
            return (Mobius(dn), Mobius(dn), Mobius(dn1))
        return (Mobius(dn), Mobius(dn1), Mobius(dn1))

    out.append(("FL1(alpha) -> FL1(1)", afl, bfl,
                MobiusSequence(2, fl1_offsets, nz,
                               "rho_2n = rho_2n+1 = diag(1, alpha^-n), nu := alpha^-n")))

    # FL1(1) -> FL2(1,-1): the mod-8 cycle id,id,mu1,mu-1,tau-1,tau-1,mu-1,mu1
    a1 = AlgebraInstance("FL1", {"alpha": 1})
    b1 = AlgebraInstance("FL2", {"alpha": 1, "beta": -1})
    cyc = {0: LinearMap2.identity(), 1: LinearMap2.identity(),
           2: LinearMap2.of_rationals(0, 1, 1, 0), 7: LinearMap2.of_rationals(0, 1, 1, 0),
           3: LinearMap2.of_rationals(0, 1, -1, 0), 6: LinearMap2.of_rationals(0, 1, -1, 0),
           4: LinearMap2.of_rationals(1, 0, 0, -1), 5: LinearMap2.of_rationals(1, 0, 0, -1)}
    out.append(("FL1(1) -> FL2(1,-1)", a1, b1,
                MobiusSequence.from_cycle([cyc[i] for i in range(8)],
                                          description="mod-8 cycle id/mu1/mu-1/tau-1")))

    # FL2(beta,gamma) -> FL2(gamma,beta): mod-4 cycle swap / id / (0 1; gamma*beta 0) / id
    a2 = AlgebraInstance("FL2", {"alpha": beta, "beta": gamma})
    b2 = AlgebraInstance("FL2", {"alpha": gamma, "beta": beta})
    bg = AssumptionSet.empty().assuming_nonzero(beta * gamma)
    mats = [LinearMap2.of_rationals(0, 1, 1, 0), LinearMap2.identity(),
            LinearMap2(Scalar.zero(), Scalar.one(), gamma * beta, Scalar.zero()),
            LinearMap2.identity()]
    out.append(("FL2(b,g) -> FL2(g,b)", a2, b2,
                MobiusSequence.from_cycle(mats, bg, "mod-4 cycle swap/id/mu_{gb}/id")))
    return out


# ---------------------------------------------------------------------------
# WL / TWL catalog
# ---------------------------------------------------------------------------

OMEGA_B_TEXT = "x^2*y^2+x*y^2*x+y^2*x^2+y*x^2*y-2*x*y*x*y-2*y*x*y*x"
TWL_RELATION_TEXTS = ("x*y^2+y^2*x", "x^2*y+y*x^2+y^3")


def pgl2_conjugate(m1: Mobius, m2: Mobius) -> bool:
    """Conjugacy in PGL2 over the algebraic closure, via trace^2/det."""
    def scalar(m):
        return m.mat.b.is_zero() and m.mat.c.is_zero() and m.mat.a == m.mat.d

    s1, s2 = scalar(m1), scalar(m2)
    if s1 or s2:
        return s1 and s2
    t1 = m1.mat.a + m1.mat.d
    t2 = m2.mat.a + m2.mat.d
    return (t1 * t1 * m2.mat.det()) == (t2 * t2 * m1.mat.det())


def wl_iso_condition(alpha, alpha_p) -> bool:
    """B1(alpha) isomorphic to B1(alpha') iff conjugate twists: a' = a^(+-1)."""
    a, ap = _sc(alpha), _sc(alpha_p)
    one, zero = Scalar.one(), Scalar.zero()
    return pgl2_conjugate(Mobius(LinearMap2(one, zero, zero, a)),
                          Mobius(LinearMap2(one, zero, zero, ap)))


def wl_catalog() -> dict:
    """The double-conic and double-line normal forms and their relations.

    B1(alpha) and B2 are derivation quotients of twists of the symmetric
    double-conic potential; the returned relations are computed, not stored.
    """
    alpha = declare_parameter("alpha")
    omega_b = parse_ncpoly(OMEGA_B_TEXT)
    phi1 = LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(), alpha)
    phi2 = LinearMap2.of_rationals(1, 1, 0, 1)
    b1 = superpot.derivation_quotient(superpot.ms_twist(omega_b, phi1))
    b2 = superpot.derivation_quotient(superpot.ms_twist(omega_b, phi2))
    twl = tuple(parse_ncpoly(t) for t in TWL_RELATION_TEXTS)
    return {
        "omega_B": omega_b,
        "B1": b1,
        "B2": b2,
        "TWL": twl,
        "iso_condition": wl_iso_condition,
    }


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


class RowReport:
    """Outcome of one catalog row: pass, fail or recorded discrepancy."""

    def __init__(self, table: str, row: str, status: str, details: str = "",
                 assumptions_used=(), witnesses: Optional[dict] = None):
        assert status in ("pass", "fail", "discrepancy")
        self.table = table
        self.row = row
        self.status = status
        self.details = details
        self.assumptions_used = list(assumptions_used)
        self.witnesses = dict(witnesses or {})

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "row": self.row,
            "status": self.status,
            "details": self.details,
            "assumptionsUsed": self.assumptions_used,
            "witnesses": self.witnesses,
        }


class VerificationReport:
    def __init__(self, table: str, rows: list[RowReport]):
        self.table = table
        self.rows = rows

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "passed": self.passed,
            "rows": [r.to_dict() for r in self.rows],
        }

    def summary(self) -> str:
        good = sum(1 for r in self.rows if r.status != "fail")
        return f"table {self.table}: {good}/{len(self.rows)} rows pass"


def _pmap(fn, items):
    """Map preserving order; honors the NCASEED_THREADS cap for table rows."""
    import os
    from concurrent.futures import ThreadPoolExecutor

    try:
        workers = int(os.environ.get("NCASEED_THREADS", "1"))
    except ValueError:
        workers = 1
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# catalog row data
# ---------------------------------------------------------------------------

# table 1: defining relations derived from the catalog pairs
_TABLE1 = (
    ("S'", "S'", 0, None,
     ("x^2*y - alpha*y*x^2 + (alpha-1)*y^3", "x*y^2 - y^2*x"),
     ("alpha",)),
    ("T'1", "T'1", 0, "gamma",
     ("x^2*y - delta^2*y*x^2 + alpha*y*x*y - alpha*delta*y^2*x",
      "x*y^2 - delta^2*y^2*x"),
     ("delta",)),
    ("T'2", "T'2", 0, "gamma",
     ("x^2*y - y*x^2 + alpha*y*x*y + (2-alpha)*y^2*x + (alpha-2)*y^3",
      "x*y^2 - y^2*x + 2*y^3"),
     ()),
    ("FL1", "FL", 0, None,
     ("x^2*y - alpha*y*x^2", "x*y^2 - beta*y^2*x"),
     ("alpha", "beta")),
    ("FL2", "FL", 1, None,
     ("y*x*y - alpha*x^3", "beta*x*y*x - y^3"),
     ("alpha", "beta")),
)

# the non-domain branches of the derivation (they never give regular algebras
# but the solver must still produce them)
_TABLE1_DEGENERATE = (
    ("S'(ii)", "S'", 1, None,
     ("alpha*x^3 - alpha*x*y^2 - y*x*y - alpha*y^2*x", "y^3"), ("alpha",)),
    ("T'1(ii)", "T'1", 1, "gamma",
     ("x^2*y + delta^2*y*x^2 - delta*x*y*x + alpha*y*x*y", "y^3"), ("delta",)),
    ("T'2(ii)", "T'2", 1, "gamma",
     ("x^2*y + y*x^2 + alpha*y*x*y - x*y*x + x*y^2 - y^2*x", "y^3"), ()),
)

# table 2: potentials, their conditions, and the degeneration boundaries
_TABLE2 = (
    ("S'", "x^2*y^2+y*x^2*y-x*y^2*x+y^2*x^2-2*y^4", (), ("table1", "S'", "alpha", 1)),
    ("T'1", "x^2*y^2-y*x^2*y-x*y^2*x+y^2*x^2-alpha*y^2*x*y+alpha*y*x*y^2",
     ("alpha",), ("direct", "alpha", 0)),
    ("T'2", "x^2*y^2-y*x^2*y-x*y^2*x+y^2*x^2+2*x*y^3+alpha*y*x*y^2-alpha*y^2*x*y"
            "-2*y^3*x+(alpha+2)*y^4",
     ("alpha-2",), ("direct", "alpha", 2)),
    ("FL1", "x^2*y^2-alpha*y*x^2*y+alpha*x*y^2*x+alpha^2*y^2*x^2",
     ("alpha",), ("table1", "FL1", "beta", "alpha")),
    ("FL2", "-alpha*beta*x^4+beta*x*y*x*y+beta*y*x*y*x-y^4",
     ("alpha*beta", "alpha-beta"), ("direct", "alpha", "beta")),
)

# expected exact determinant factorizations (None: recorded sign discrepancy,
# checked by component vanishing instead)
_TABLE2_E = {
    "S'": "S'",
    "T'1": "T'1@1",   # the potential corresponds to the delta=1 curve
    "T'2": "T'2",
    "FL1": "FL",
    "FL2": "FL",
}

_ISOM_ROWS = (
    ("P1", ("x^2*y-alpha*y*x^2", "x*y^2-alpha*y^2*x"), ("alpha",),
     "alpha' = alpha or 1/alpha"),
    ("P2", ("x^2*y-y*x^2+y*x*y", "x*y^2-y^2*x+y^3"), (), "single class"),
    ("S1", ("alpha*beta*x^2*y+(alpha+beta)*x*y*x+y*x^2",
            "alpha*beta*x*y^2+(alpha+beta)*y*x*y+y^2*x"),
     ("alpha*beta", "alpha^2-beta^2"), "{a',b'} = {a,b} or {1/a,1/b}"),
    ("S2", ("x*y^2+y^2*x+(alpha+beta)*x^3",
            "x^2*y+y*x^2+(1/alpha+1/beta)*y^3"),
     ("alpha*beta", "alpha^2-beta^2"), "a'/b' = (a/b)^(+-1)"),
    ("T1", ("x^2*y-2*x*y*x+y*x^2-2*(2*beta-1)*y*x*y+2*(2*beta-1)*x*y^2"
            "+2*beta*(beta-1)*y^3",
            "x*y^2-2*y*x*y+y^2*x"), (), "beta' = beta or -beta"),
    ("T2", ("x^2*y+2*x*y*x+y*x^2+2*y^3", "x*y^2+2*y*x*y+y^2*x"), (),
     "single class"),
    ("S'", ("x*y^2-y^2*x", "x^2*y+y*x^2-2*y^3"), (), "single class"),
    ("T'1", ("x*y^2-y^2*x", "x^2*y-y*x^2+y*x*y-x*y^2"), (), "single class"),
    ("T'2", ("x*y^2-y^2*x+2*y^3",
             "x^2*y-y*x^2-alpha*x*y^2+alpha*y*x*y+2*y^2*x-(alpha+2)*y^3"),
     (), "alpha' = alpha"),
    ("FL1", ("x*y^2+alpha*y^2*x", "x^2*y-alpha*y*x^2"), ("alpha",),
     "alpha' = alpha or -1/alpha"),
    ("FL2", ("-alpha*x^3+y*x*y", "beta*x*y*x-y^3"), ("alpha*beta",),
     "(a',b') = (a,b) in P1"),
    ("TWL", ("x*y^2+y^2*x", "x^2*y+y*x^2+y^3"), (), "single class"),
    ("WL1", ("alpha^2*x*y^2+y^2*x-2*alpha*y*x*y",
             "alpha^2*x^2*y+y*x^2-2*alpha*x*y*x"), ("alpha",),
     "alpha' = alpha or 1/alpha"),
    ("WL2", ("x*y^2+y^2*x-2*y*x*y",
             "x^2*y+y*x^2-2*x*y*x+4*x*y^2-4*y*x*y+2*y^3"), (), "single class"),
)

_GME_ROWS = (
    ("P", ("x^2*y-y*x^2", "x*y^2-y^2*x"), (), "single class"),
    ("S", ("alpha*beta*x^2*y+(alpha+beta)*x*y*x+y*x^2",
           "alpha*beta*x*y^2+(alpha+beta)*y*x*y+y^2*x"),
     ("alpha*beta", "alpha^2-beta^2"), "a'/b' = (a/b)^(+-1)"),
    ("T", ("x^2*y-2*x*y*x+y*x^2-2*y*x*y+2*x*y^2", "x*y^2-2*y*x*y+y^2*x"), (),
     "single class"),
    ("S'", ("x*y^2-y^2*x", "x^2*y+y*x^2-2*y^3"), (), "single class"),
    ("T'", ("x*y^2-y^2*x", "x^2*y-y*x^2+y*x*y-x*y^2"), (), "single class"),
    ("FL", ("-alpha*x^3+y*x*y", "beta*x*y*x-y^3"), ("alpha*beta",),
     "(a',b') = (a,b) or (b,a) in P1"),
    ("TWL", ("x*y^2+y^2*x", "x^2*y+y*x^2+y^3"), (), "single class"),
    ("WL", ("x*y^2+y^2*x-2*y*x*y", "x^2*y+y*x^2-2*x*y*x"), (), "single class"),
)


def _conditions_set(texts) -> AssumptionSet:
    from .exprparse import parse_scalar

    out = AssumptionSet.empty()
    for t in texts:
        out = out.assuming_nonzero(parse_scalar(t))
    return out


def _declare_row_params():
    for name in ("alpha", "beta", "gamma", "delta"):
        declare_parameter(name)


# ---------------------------------------------------------------------------
# table reproduction
# ---------------------------------------------------------------------------


def _span_equal_polys(basis, expected_texts, assumptions, mapping=None) -> bool:
    expected = [parse_ncpoly(t) for t in expected_texts]
    if mapping:
        expected = [p.subs(mapping) for p in expected]
    return linalg.span_equal(coefficient_rows(basis, 3),
                             coefficient_rows(expected, 3), assumptions)


def _table1_row(row, table="1") -> RowReport:
    from .geometry import catalog_sigma as _cs

    name, cat, fam_idx, pivot_param, expected, _conds = row
    fam = _cs(cat)[fam_idx]
    branches = g2solver.relations_from_pair(fam)
    details = []
    witnesses = {}
    two_dim = [rb for rb in branches if rb.dimension == 2]
    if not two_dim:
        return RowReport(table, name, "fail", "no 2-dimensional relation branch")
    ok = True
    for rb in two_dim:
        mapping = rb.assumptions.substitution()
        if pivot_param is not None and pivot_param not in mapping:
            ok = False
            details.append(f"2-dim branch missing the {pivot_param} pivot binding")
            continue
        if not _span_equal_polys(rb.basis, expected, rb.assumptions, mapping):
            ok = False
            details.append(f"span mismatch under {rb.assumptions}")
        else:
            details.append(f"dim 2 and exact span match under {rb.assumptions}")
    if pivot_param is not None:
        generic = [rb for rb in branches if rb.dimension == 1]
        if not generic:
            ok = False
            details.append("expected a 1-dimensional generic branch")
        else:
            details.append(
                "generic branch is 1-dimensional: "
                + "; ".join(str(p) for rb in generic for p in rb.basis))
    witnesses["relations"] = "; ".join(str(p) for p in two_dim[0].basis)
    status = "pass" if ok else "fail"
    assum = [s for rb in two_dim for s in rb.assumptions.describe()]
    return RowReport(table, name, status, " | ".join(details), assum, witnesses)


def reproduce_table1() -> VerificationReport:
    _declare_row_params()
    rows = _pmap(_table1_row, list(_TABLE1))
    rows += _pmap(_table1_row, list(_TABLE1_DEGENERATE))
    return VerificationReport("1", rows)


def _catalog_components_for(tag: str):
    from .geometry import catalog_E as _ce

    if tag == "T'1@1":
        comps = _ce("T'1")
        return [c.subs({"delta": Scalar.rational(1)}) for c in comps]
    return _ce(tag)


def _all_catalog_components():
    """Every catalog component (parametric graphs sampled at delta = 3)."""
    out = []
    for tag in ("S'", "T'2", "FL"):
        for c in _catalog_components_for(tag):
            if all(c != d for d in out):
                out.append(c)
    for c in _catalog_components_for("T'1@1"):
        if all(c != d for d in out):
            out.append(c)
    from .geometry import catalog_E as _ce
    sampled = [c.subs({"delta": Scalar.rational(3)}) for c in _ce("T'1")]
    for c in sampled:
        if all(c != d for d in out):
            out.append(c)
    return out


def _boundary_potential(spec):
    """The potential at a Type-P boundary, per the table's recipe."""
    kind = spec[0]
    if kind == "direct":
        return None  # substitute into the row potential directly
    _, t1_row, param, value = spec
    row = next(r for r in _TABLE1 if r[0] == t1_row)
    g1, g2 = (parse_ncpoly(t) for t in row[4])
    val = Scalar.param(value) if isinstance(value, str) else Scalar.rational(value)
    mapping = {param: val}
    g1, g2 = g1.subs(mapping), g2.subs(mapping)
    asmp = AssumptionSet.empty()
    for c in row[5]:
        p = Scalar.param(c).subs(mapping)
        if not p.is_zero() and not p.is_rational():
            asmp = asmp.assuming_nonzero(p)
        elif p.is_rational() and p.as_fraction() != 0:
            pass
    sols = superpot.potential_from_relations(g1, g2, asmp)
    return sols[0].value[0]


def _table2_row(row) -> RowReport:
    name, pot_text, cond_texts, boundary = row
    _declare_row_params()
    omega = parse_ncpoly(pot_text)
    asmp = _conditions_set(cond_texts)
    details = []
    witnesses = {}
    ok = True
    status = "pass"
    theta = superpot.twisting_matrix(omega, asmp)
    if theta is None:
        return RowReport("2", name, "fail", "not a twisted superpotential")
    witnesses["theta"] = str(theta)
    if not superpot.is_standard(omega, asmp):
        ok = False
        details.append("derivatives are dependent")
    zero_branches = segre.common_zero_empty_cases(segre.m_matrix_biforms(omega), asmp)
    if not all(br.value for br in zero_branches):
        ok = False
        details.append("common zero locus is nonempty on some branch")
    else:
        details.append("twisted + standard + empty zero locus"
                       + (f" ({len(zero_branches)} branches)" if len(zero_branches) > 1 else ""))
    # boundary degeneration: the determinant must vanish identically
    if boundary[0] == "direct":
        _, param, value = boundary
        val = Scalar.param(value) if isinstance(value, str) else Scalar.rational(value)
        omega_b = omega.subs({param: val})
        det_b = segre.det_segre(superpot.m_matrix(omega_b))
    else:
        omega_b = _boundary_potential(boundary)
        det_b = segre.det_segre(superpot.m_matrix(omega_b))
    if det_b.is_zero():
        details.append(f"boundary {boundary[1:]} degenerates: det == 0")
    else:
        ok = False
        details.append(f"boundary determinant is {det_b}, expected 0")
    # determinant versus the catalog curve
    det = segre.det_segre(superpot.m_matrix(omega))
    e_comps = _catalog_components_for(_TABLE2_E[name])
    for c in e_comps:
        if not segre.vanishes_on_component(det, c):
            ok = False
            details.append(f"determinant does not vanish on {c}")
    others = [c for c in _all_catalog_components() if all(c != d for d in e_comps)]
    for c in others:
        if segre.vanishes_on_component(det, c):
            ok = False
            details.append(f"determinant vanishes on foreign component {c}")
    if name == "FL2":
        a, b = Scalar.param("alpha"), Scalar.param("beta")
        expected = segre.BiForm((2, 2), {(1, 1): b * (a - b)})
        if det == expected:
            details.append("det == beta*(alpha-beta)*x1*x2*y1*y2 exactly")
        else:
            ok = False
            details.append("FL2 determinant mismatch")
    if name == "T'1":
        a = Scalar.param("alpha")
        yy = segre.BiForm((1, 1), {(0, 0): Scalar.one()})
        xmy = segre.BiForm((1, 1), {(1, 0): Scalar.one(), (0, 1): -Scalar.one()})
        if det == (yy * xmy).scale(-a):
            details.append("det == -alpha*y1y2*(x1y2 - y1x2) exactly")
        else:
            ok = False
            details.append("T'1 determinant mismatch")
    if name == "S'":
        disp = (segre.BiForm((1, 1), {(1, 1): Scalar.one(), (0, 0): Scalar.one()})
                * segre.BiForm((1, 1), {(0, 0): Scalar.one()})).scale(Scalar.rational(-2))
        if det != disp:
            status = "discrepancy" if ok else "fail"
            details.append(
                "recorded discrepancy: displayed factorization -2(x1x2+y1y2)(y1y2) "
                "differs in one sign; expansion gives -2*y1y2*(x1x2 - y1y2), and the "
                "component-vanishing check above confirms the expansion")
    if not ok:
        status = "fail"
    return RowReport("2", name, status, " | ".join(details),
                     [str(a) for a in asmp.describe()], witnesses)


def reproduce_table2() -> VerificationReport:
    return VerificationReport("2", _pmap(_table2_row, list(_TABLE2)))


# ---------------------------------------------------------------------------
# cross-type 2-equivalence separation
# ---------------------------------------------------------------------------


def graphs_two_equivalent_line_fixing(ma: Mobius, mb: Mobius) -> bool:
    """Is there rho = (1 b; 0 d), d != 0, with rho*A proportional to B*rho?

    This is the 2-equivalence question for two triangle/tangent normal-form
    curves sharing the line pair through P: any curve equivalence must fix P
    on both factors, hence is upper triangular.
    """
    for name in ("wb", "wd"):
        declare_parameter(name)
    rho = LinearMap2(Scalar.one(), Scalar.param("wb"), Scalar.zero(), Scalar.param("wd"))
    m1 = rho * ma.mat
    m2 = mb.mat * rho
    v1, v2 = m1.entries(), m2.entries()
    eqs = []
    for i in range(4):
        for j in range(i + 1, 4):
            p = (v1[i] * v2[j] - v1[j] * v2[i]).num
            p = poly_primitive(p)
            if not p.is_zero() and p not in eqs:
                eqs.append(p)
    solved = solve_poly_system(eqs, ("wb", "wd"), ("wd",), AssumptionSet.empty())
    if solved is None:
        return False
    conditions, _sol, _rem = solved
    return not conditions


def type_separation_checks() -> list[tuple[str, bool]]:
    """Spot checks that distinct normal-form curves are not 2-equivalent."""
    swap = Mobius.of_rationals(0, 1, 1, 0)
    ident = Mobius.identity()
    tau11 = Mobius.of_rationals(1, 1, 0, 1)
    return [
        ("S' vs T'1(delta=1)", graphs_two_equivalent_line_fixing(swap, ident)),
        ("S' vs T'2", graphs_two_equivalent_line_fixing(swap, tau11)),
        ("T'1(delta=1) vs T'2", graphs_two_equivalent_line_fixing(ident, tau11)),
    ]


# ---------------------------------------------------------------------------
# tables 3 and 4
# ---------------------------------------------------------------------------

_T2_GRID = tuple(Fraction(v) for v in
                 (-9, -7, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 7, 9)) + (
    Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(11))

_FL1_GRID = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(3),
             Fraction(-3), Fraction(1, 2), Fraction(-1, 2), Fraction(4), Fraction(5),
             Fraction(1, 3), Fraction(-1, 3), Fraction(6), Fraction(-4),
             Fraction(2, 3), Fraction(-2, 3), Fraction(7), Fraction(-5),
             Fraction(3, 2), Fraction(8))

_FL2_GRID = ((1, 2), (2, 4), (3, 6), (1, -1), (2, -2), (-1, 1), (1, 3), (2, 6),
             (5, 1), (10, 2), (1, 4), (3, 2), (6, 4), (-2, 3), (4, -6), (1, 5),
             (2, 10), (7, 3), (1, 1), (2, 2))


def _symbolic_conditions(tag: str):
    """Solver-derived isomorphism conditions with fully generic parameters."""
    _declare_row_params()
    ap = declare_parameter("alphap")
    bp = declare_parameter("betap")
    al, be = Scalar.param("alpha"), Scalar.param("beta")
    if tag == "T'2":
        a = AlgebraInstance("T'2", {"alpha": al})
        b = AlgebraInstance("T'2", {"alpha": ap})
    elif tag == "FL1":
        a = AlgebraInstance("FL1", {"alpha": al})
        b = AlgebraInstance("FL1", {"alpha": ap})
    elif tag == "FL2":
        a = AlgebraInstance("FL2", {"alpha": al, "beta": be})
        b = AlgebraInstance("FL2", {"alpha": ap, "beta": bp})
    else:
        raise UnknownType(tag)
    res = solve_iso_geometric(a, b)
    return sorted(sorted(str(p) for p in shape) for shape in res.conditions)


_EXPECTED_SYMBOLIC = {
    "T'2": [["alpha - alphap"]],
    "FL1": [["alpha - alphap"], ["alpha*alphap + 1"]],
    "FL2": [["alpha*betap - alphap*beta"], ["alpha*betap - alphap*beta"]],
}


def _grid_instances(tag: str):
    if tag == "T'2":
        return [AlgebraInstance("T'2", {"alpha": v}) for v in _T2_GRID]
    if tag == "FL1":
        return [AlgebraInstance("FL1", {"alpha": v}) for v in _FL1_GRID]
    if tag == "FL2":
        return [AlgebraInstance("FL2", {"alpha": Fraction(x), "beta": Fraction(y)})
                for x, y in _FL2_GRID]
    raise UnknownType(tag)


def _table3_solver_row(tag: str) -> RowReport:
    details = []
    ok = True
    got = _symbolic_conditions(tag)
    want = _EXPECTED_SYMBOLIC[tag]
    if got == want:
        details.append(f"symbolic conditions {got} match the closed form")
    else:
        ok = False
        details.append(f"symbolic conditions {got} differ from {want}")
    insts = _grid_instances(tag)
    hits = 0
    tried = 0
    try:
        for a in insts:
            for b in insts:
                tried += 1
                if bool(iso_condition(a, b, want_witness=False)):  # raises on mismatch
                    hits += 1
    except NcaseedError as exc:
        ok = False
        details.append(f"grid disagreement: {exc}")
    details.append(f"grid {len(insts)}x{len(insts)}: solver and closed form agree; "
                   f"{hits}/{tried} pairs isomorphic")
    return RowReport("3", tag, "pass" if ok else "fail", " | ".join(details))


def reproduce_table3() -> VerificationReport:
    _declare_row_params()
    rows = []
    # parameter-free single classes
    a = AlgebraInstance("S'")
    r = iso_condition(a, AlgebraInstance("S'"))
    rows.append(RowReport("3", "S'", "pass" if bool(r) else "fail",
                          "single class; identity witness"))
    samples = [Fraction(1), Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(5)]
    t1_ok = True
    wit = ""
    for v in samples:
        res = iso_condition(AlgebraInstance("T'1", {"alpha": samples[0]}),
                            AlgebraInstance("T'1", {"alpha": v}))
        if not bool(res):
            t1_ok = False
        elif v == samples[-1]:
            wit = str(res.witness)
    rows.append(RowReport("3", "T'1", "pass" if t1_ok else "fail",
                          f"all sampled instances isomorphic (e.g. witness {wit})"))
    for tag in ("T'2", "FL1", "FL2"):
        rows.append(_table3_solver_row(tag))
    seps = type_separation_checks()
    ok = all(not equivalent for _, equivalent in seps)
    rows.append(RowReport("3", "cross-type", "pass" if ok else "fail",
                          "; ".join(f"{name}: {'in' if not eq else ''}equivalent"
                                    for name, eq in seps)))
    return VerificationReport("3", rows)


def reproduce_table4() -> VerificationReport:
    _declare_row_params()
    rows = []
    rows.append(RowReport("4", "S'", "pass", "single class"))
    seq_rows = []
    all_ok = True
    for name, a, b, seq in proof_sequences():
        ok = verify_morita_sequence(a, b, seq)
        all_ok = all_ok and ok
        seq_rows.append(RowReport("4", f"sequence {name}",
                                  "pass" if ok else "fail",
                                  f"{seq.description}; all {seq.period} residue classes"))
    t_ok = morita_condition(AlgebraInstance("T'1", {"alpha": 1}),
                            AlgebraInstance("T'2", {"alpha": 0}))
    rows.append(RowReport("4", "T'", "pass" if t_ok else "fail",
                          "T'1 and T'2 merge into one class (bridged by the "
                          "verified index sequences)"))
    # FL closed form on grids + the FL1 -> FL2(1,-1) collapse
    fl_ok = True
    details = []
    insts = _grid_instances("FL2")
    agree = 0
    for a in insts:
        for b in insts:
            aa, ab = a.bindings["alpha"].as_fraction(), a.bindings["beta"].as_fraction()
            ba, bb = b.bindings["alpha"].as_fraction(), b.bindings["beta"].as_fraction()
            closed = (ba * ab == bb * aa) or (ba * aa == bb * ab)
            if morita_condition(a, b) == closed:
                agree += 1
            else:
                fl_ok = False
    details.append(f"FL2 grid {len(insts)}x{len(insts)}: {agree} agreements with the closed form")
    for v in (Fraction(1), Fraction(3), Fraction(-2)):
        a = AlgebraInstance("FL1", {"alpha": v})
        if not morita_condition(a, AlgebraInstance("FL2", {"alpha": 1, "beta": -1})):
            fl_ok = False
            details.append(f"FL1({v}) failed to merge with FL2(1,-1)")
        if morita_condition(a, AlgebraInstance("FL2", {"alpha": 1, "beta": 2})):
            fl_ok = False
            details.append(f"FL1({v}) wrongly equivalent to FL2(1,2)")
    rows.append(RowReport("4", "FL", "pass" if fl_ok else "fail", " | ".join(details)))
    rows.extend(seq_rows)
    # isomorphic implies Morita equivalent on samples
    imp_ok = True
    for tag, bindings in (("T'2", [{"alpha": 3}, {"alpha": 3}]),
                          ("FL1", [{"alpha": 2}, {"alpha": Fraction(-1, 2)}]),
                          ("FL2", [{"alpha": 1, "beta": 2}, {"alpha": 2, "beta": 4}])):
        a = AlgebraInstance(tag, bindings[0])
        b = AlgebraInstance(tag, bindings[1])
        if bool(iso_condition(a, b)) and not morita_condition(a, b):
            imp_ok = False
    rows.append(RowReport("4", "iso=>morita", "pass" if imp_ok else "fail",
                          "graded isomorphism implies Morita equivalence on samples"))
    return VerificationReport("4", rows)


# ---------------------------------------------------------------------------
# summary tables (ISOM / GME)
# ---------------------------------------------------------------------------

_SAMPLES = {
    ("alpha",): [{"alpha": Fraction(3)}, {"alpha": Fraction(-1, 2)}],
    ("alpha", "beta"): [{"alpha": Fraction(3), "beta": Fraction(2)},
                        {"alpha": Fraction(1, 2), "beta": Fraction(-5)}],
    ("beta",): [{"beta": Fraction(2)}, {"beta": Fraction(-1, 3)}],
    (): [],
}


def _row_params(rel_texts):
    syms = set()
    for t in rel_texts:
        for name in ("alpha", "beta", "gamma", "delta"):
            if name in t:
                syms.add(name)
    return tuple(sorted(syms))


def _pipeline_row(table: str, tag: str, rel_texts, cond_texts, cond_note: str) -> RowReport:
    _declare_row_params()
    g1, g2 = (parse_ncpoly(t) for t in rel_texts)
    asmp = _conditions_set(cond_texts)
    details = []
    witnesses = {}
    try:
        branches = superpot.potential_from_relations(g1, g2, asmp)
    except NcaseedError as exc:
        return RowReport(table, tag, "fail", f"no potential: {exc}")
    ok = True
    for br in branches:
        omega, coeffs = br.value
        regular = segre.is_as_regular(omega, br.assumptions)
        if all(sub.value for sub in regular):
            details.append(f"potential found and regular under {br.assumptions}")
        else:
            bad = [str(sub.assumptions) for sub in regular if not sub.value]
            ok = False
            details.append(f"not regular under {bad}")
    witnesses["omega"] = str(branches[0].value[0])
    params = _row_params(rel_texts)
    for bindings in _SAMPLES.get(params, []):
        try:
            gs1 = g1.subs({k: Scalar.rational(v) for k, v in bindings.items()})
            gs2 = g2.subs({k: Scalar.rational(v) for k, v in bindings.items()})
            nbr = superpot.potential_from_relations(gs1, gs2)
            sample_ok = all(sub.value
                            for b2 in nbr
                            for sub in segre.is_as_regular(b2.value[0], b2.assumptions))
        except NcaseedError as exc:
            sample_ok = False
            details.append(f"sample {bindings}: {exc}")
        if not sample_ok:
            ok = False
            details.append(f"sample {bindings} fails the pipeline")
    details.append(f"class condition: {cond_note}")
    assum = [s for br in branches for s in br.assumptions.describe()]
    return RowReport(table, tag, "pass" if ok else "fail",
                     " | ".join(details), assum, witnesses)


def _wl_twist_rows() -> list[RowReport]:
    """Cross-checks of the summary WL rows against the computed twists."""
    cat = wl_catalog()
    rows = []
    alpha = Scalar.param("alpha")
    asmp = AssumptionSet.empty().assuming_nonzero(alpha)
    # WL2: exact match
    expected2 = [parse_ncpoly(t) for t in
                 ("x*y^2+y^2*x-2*y*x*y",
                  "x^2*y+y*x^2-2*x*y*x+4*x*y^2-4*y*x*y+2*y^3")]
    ok2 = linalg.span_equal(coefficient_rows(list(cat["B2"]), 3),
                            coefficient_rows(expected2, 3), AssumptionSet.empty())
    rows.append(RowReport("ISOM", "WL2-twist", "pass" if ok2 else "fail",
                          "derivation quotient of the unipotent twist matches the "
                          "WL2 row exactly"))
    # WL1: exact match after alpha -> 1/alpha
    inv = {"alpha": alpha.inverse()}
    expected1 = [parse_ncpoly(t).subs(inv) for t in
                 ("alpha^2*x*y^2+y^2*x-2*alpha*y*x*y",
                  "alpha^2*x^2*y+y*x^2-2*alpha*x*y*x")]
    ok1 = linalg.span_equal(coefficient_rows(list(cat["B1"]), 3),
                            coefficient_rows(expected1, 3), asmp)
    same_orientation = linalg.span_equal(
        coefficient_rows(list(cat["B1"]), 3),
        coefficient_rows([parse_ncpoly("alpha^2*x*y^2+y^2*x-2*alpha*y*x*y"),
                          parse_ncpoly("alpha^2*x^2*y+y*x^2-2*alpha*x*y*x")], 3),
        asmp)
    status = "discrepancy" if (ok1 and not same_orientation) else (
        "pass" if ok1 else "fail")
    rows.append(RowReport(
        "ISOM", "WL1-twist", status,
        "recorded discrepancy: the diagonal twist by diag(1,alpha) yields the WL1 "
        "row at parameter 1/alpha exactly (families coincide; the row's own class "
        "condition alpha' = alpha^(+-1) identifies the two presentations); no "
        "slot/transpose convention reproduces WL1 and WL2 orientations "
        "simultaneously"))
    return rows


def reproduce_isom() -> VerificationReport:
    rows = _pmap(lambda r: _pipeline_row("ISOM", *r), list(_ISOM_ROWS))
    rows.extend(_wl_twist_rows())
    return VerificationReport("ISOM", rows)


def reproduce_gme() -> VerificationReport:
    rows = _pmap(lambda r: _pipeline_row("GME", *r), list(_GME_ROWS))
    return VerificationReport("GME", rows)


TABLE_IDS = ("1", "2", "3", "4", "ISOM", "GME")


def reproduce_table(table_id: str) -> VerificationReport:
    """Re-derive and verify one catalog table, row by row."""
    tid = str(table_id).upper()
    dispatch = {
        "1": reproduce_table1,
        "2": reproduce_table2,
        "3": reproduce_table3,
        "4": reproduce_table4,
        "ISOM": reproduce_isom,
        "GME": reproduce_gme,
    }
    if tid not in dispatch:
        raise UnknownType(f"unknown table {table_id!r} (expected one of {TABLE_IDS})")
    return dispatch[tid]()
