"""Exact field arithmetic for Q extended by named parameters and square roots.

A ``Scalar`` is a quotient num/den of multivariate polynomials over Q in
declared parameter symbols, optionally involving formal square-root symbols
``sqrt_<n>`` subject to the reduction rule ``sqrt_<n>**2 -> radicand``.
Values are immutable and canonically normalized, so ``==`` is decidable
structural equality.

Polynomials are kept sparse: a monomial is a sorted tuple of
``(symbol, exponent)`` pairs and a polynomial maps monomials to ``Fraction``
coefficients.  The monomial order is graded lexicographic over alphabetically
sorted symbol names.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    AssumptionViolated,
    DenominatorVanishes,
    InfeasibleBranch,
    ReservedSymbol,
    SqrtTowerTooDeep,
    UnboundParameter,
    ZeroDivisionScalar,
    ZeroRadicand,
)

# Symbols with hard-coded meaning elsewhere in the library.  x and y are the
# free-algebra generators; u0, u1 are the fresh homogeneous parameters used by
# the geometric solvers.
RESERVED_SYMBOLS = {"x", "y", "u0", "u1"}

_PARAMS: set[str] = set()
_SQRT: dict[str, "Poly"] = {}
_SQRT_COUNTER = [0]


def declare_parameter(name: str) -> "Scalar":
    """Register a parameter symbol and return it as a Scalar.

    Re-declaring an existing name is a no-op.  Generator letters and other
    reserved names are rejected to keep the expression grammar unambiguous.
    """
    if name in RESERVED_SYMBOLS:
        raise ReservedSymbol(f"{name!r} is reserved")
    if name.startswith("sqrt_"):
        raise ReservedSymbol("the sqrt_ prefix is reserved for adjoined roots")
    if not name.isidentifier():
        raise ReservedSymbol(f"{name!r} is not a valid parameter name")
    _PARAMS.add(name)
    return Scalar.param(name)


def declared_parameters() -> frozenset[str]:
    return frozenset(_PARAMS)


def is_declared(name: str) -> bool:
    return name in _PARAMS


def sqrt_rules() -> dict[str, "Poly"]:
    """Snapshot of the registered square-root reduction rules."""
    return dict(_SQRT)


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

Mono = tuple  # tuple[tuple[str, int], ...]

_ONE_MONO: Mono = ()


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in d.items() if e))


def _mono_deg(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_divides(a: Mono, b: Mono) -> bool:
    """True iff monomial a divides b."""
    db = dict(b)
    return all(db.get(s, 0) >= e for s, e in a)


def _mono_quot(b: Mono, a: Mono) -> Mono:
    d = dict(b)
    for s, e in a:
        d[s] -= e
    return tuple(sorted((s, e) for s, e in d.items() if e))


def _mono_key(m: Mono, symbols: list[str]):
    return (_mono_deg(m), tuple(dict(m).get(s, 0) for s in symbols))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Immutable sparse multivariate polynomial over Q."""

    __slots__ = ("t",)

    def __init__(self, terms: dict):
        self.t = terms

    # -- constructors

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({} if c == 0 else {_ONE_MONO: c})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    @staticmethod
    def _clean(raw: dict) -> "Poly":
        return Poly({m: c for m, c in raw.items() if c != 0})

    # -- queries

    def is_zero(self) -> bool:
        return not self.t

    def is_const(self) -> bool:
        return not self.t or (len(self.t) == 1 and _ONE_MONO in self.t)

    def const_value(self) -> Fraction:
        if not self.t:
            return Fraction(0)
        return self.t[_ONE_MONO]

    def symbols(self) -> set[str]:
        out = set()
        for m in self.t:
            for s, _ in m:
                out.add(s)
        return out

    def total_degree(self) -> int:
        return max((_mono_deg(m) for m in self.t), default=0)

    def degree_in(self, sym: str) -> int:
        return max((dict(m).get(sym, 0) for m in self.t), default=0)

    def has_sqrt(self) -> bool:
        return any(s in _SQRT for s in self.symbols())

    def lead(self, symbols: Optional[list[str]] = None):
        """Leading (monomial, coefficient) under graded lex."""
        if not self.t:
            raise ValueError("zero polynomial has no leading term")
        if symbols is None:
            symbols = sorted(self.symbols())
        m = max(self.t, key=lambda mm: _mono_key(mm, symbols))
        return m, self.t[m]

    # -- arithmetic

    def __add__(self, other: "Poly") -> "Poly":
        if not self.t:
            return other
        if not other.t:
            return self
        d = dict(self.t)
        for m, c in other.t.items():
            nc = d.get(m, Fraction(0)) + c
            if nc:
                d[m] = nc
            else:
                d.pop(m, None)
        return Poly(d)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.t.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.t or not other.t:
            return Poly({})
        d: dict = {}
        for m1, c1 in self.t.items():
            for m2, c2 in other.t.items():
                m = _mono_mul(m1, m2)
                nc = d.get(m, Fraction(0)) + c1 * c2
                if nc:
                    d[m] = nc
                else:
                    d.pop(m, None)
        return _sqrt_reduce(Poly(d))

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly({})
        return Poly({m: cc * c for m, cc in self.t.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    # -- evaluation / substitution

    def eval(self, bindings: dict) -> Fraction:
        out = Fraction(0)
        for m, c in self.t.items():
            v = c
            for s, e in m:
                if s not in bindings:
                    raise UnboundParameter(f"parameter {s!r} is unbound")
                v *= Fraction(bindings[s]) ** e
            out += v
        return out

    def subs(self, mapping: dict) -> "Scalar":
        """Substitute symbols by Scalars; unmapped symbols stay symbolic."""
        out = Scalar.zero()
        for m, c in self.t.items():
            term = Scalar.rational(c)
            for s, e in m:
                base = mapping.get(s)
                if base is None:
                    base = Scalar(Poly.var(s), Poly.const(1))
                for _ in range(e):
                    term = term * base
            out = out + term
        return out

    # -- display

    def __str__(self) -> str:
        if not self.t:
            return "0"
        symbols = sorted(self.symbols())
        monos = sorted(self.t, key=lambda m: _mono_key(m, symbols), reverse=True)
        parts = []
        for m in monos:
            c = self.t[m]
            factors = [f"{s}^{e}" if e > 1 else s for s, e in m]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def _sqrt_reduce(p: Poly) -> Poly:
    """Rewrite sqrt symbols to exponent <= 1 using their radicands."""
    while True:
        target = None
        for m in p.t:
            for s, e in m:
                if e >= 2 and s in _SQRT:
                    target = (m, s, e)
                    break
            if target:
                break
        if target is None:
            return p
        m, s, e = target
        c = p.t[m]
        rest = dict(p.t)
        del rest[m]
        stripped = tuple((ss, ee) for ss, ee in m if ss != s)
        if e % 2:
            stripped = _mono_mul(stripped, ((s, 1),))
        replacement = Poly({stripped: c}) * (_SQRT[s] ** (e // 2))
        p = Poly(rest) + replacement


# ---------------------------------------------------------------------------
# gcd and exact division
# ---------------------------------------------------------------------------


def poly_exact_div(f: Poly, g: Poly) -> Optional[Poly]:
    """Return f/g when the division is exact, else None."""
    if g.is_zero():
        raise ZeroDivisionScalar("polynomial division by zero")
    if f.is_zero():
        return Poly({})
    symbols = sorted(f.symbols() | g.symbols())
    gl, glc = g.lead(symbols)
    q: dict = {}
    r = f
    while not r.is_zero():
        rl, rlc = r.lead(symbols)
        if not _mono_divides(gl, rl):
            return None
        qm = _mono_quot(rl, gl)
        qc = rlc / glc
        q[qm] = q.get(qm, Fraction(0)) + qc
        r = r - Poly({qm: qc}) * g
    return Poly._clean(q)


def _frac_content(p: Poly) -> Fraction:
    """Positive rational c with p/c integer-primitive; sign of leading coeff kept out."""
    nums = [abs(c.numerator) for c in p.t.values()]
    dens = [c.denominator for c in p.t.values()]
    num_gcd = 0
    for n in nums:
        num_gcd = math.gcd(num_gcd, n)
    den_lcm = 1
    for d in dens:
        den_lcm = den_lcm * d // math.gcd(den_lcm, d)
    return Fraction(num_gcd, den_lcm)


def poly_primitive(p: Poly) -> Poly:
    """Scale to integer content 1 with positive leading coefficient."""
    if p.is_zero():
        return p
    c = _frac_content(p)
    _, lc = p.lead()
    if lc < 0:
        c = -c
    return p.scale(1 / c)


def _to_univar(p: Poly, v: str) -> dict:
    out: dict = {}
    for m, c in p.t.items():
        d = dict(m)
        e = d.pop(v, 0)
        rest = tuple(sorted(d.items()))
        out.setdefault(e, {})[rest] = c
    return {e: Poly(t) for e, t in out.items()}


def _from_univar(u: dict, v: str) -> Poly:
    out = Poly({})
    for e, coef in u.items():
        vm = Poly({((v, e),): Fraction(1)}) if e else Poly.const(1)
        out = out + coef * vm
    return out


def _gcd_list(ps: Iterable[Poly]) -> Poly:
    out = Poly({})
    for p in ps:
        out = poly_gcd(out, p)
        if out.is_const() and not out.is_zero():
            return Poly.const(1)
    return out


def _coprime_by_evaluation(f: Poly, g: Poly, syms: list[str]) -> bool:
    """Rigorous fast path: certify gcd(f, g) == 1 by specializations.

    For each variable v, substitute small integers for the others so that
    the v-degrees of both polynomials are preserved; then deg_v(gcd) is
    bounded by the degree of the univariate gcd of the specializations.
    All bounds zero proves the gcd constant.
    """
    for v in syms:
        dv_f, dv_g = f.degree_in(v), g.degree_in(v)
        if dv_f == 0 or dv_g == 0:
            continue  # v cannot appear in the gcd anyway... unless in both
        others = [s for s in syms if s != v]
        proved = False
        for attempt in range(4):
            point = {s: 3 + 2 * attempt + 5 * i for i, s in enumerate(others)}
            fu = _specialize_univar(f, v, point)
            gu = _specialize_univar(g, v, point)
            if fu is None or gu is None:
                continue
            if len(fu) - 1 != dv_f or len(gu) - 1 != dv_g:
                continue  # degree dropped; pick another point
            if _frac_univ_gcd_degree(fu, gu) == 0:
                proved = True
            break
        if not proved:
            return False
    # no variable can appear in the gcd, and the rational content is a unit
    return True


def _specialize_univar(p: Poly, v: str, point: dict):
    """Coefficient list of p with all variables but v evaluated; None if zero."""
    coeffs: dict[int, Fraction] = {}
    for m, c in p.t.items():
        val = c
        deg = 0
        for s, e in m:
            if s == v:
                deg = e
            else:
                val *= Fraction(point[s]) ** e
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + val
    top = max((d for d, c in coeffs.items() if c != 0), default=-1)
    if top < 0:
        return None
    return [coeffs.get(i, Fraction(0)) for i in range(top + 1)]


def _frac_univ_gcd_degree(f: list, g: list) -> int:
    """Degree of gcd of univariate rational-coefficient polynomials."""
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    f, g = trim(list(f)), trim(list(g))
    while g:
        # remainder of f by g
        while len(f) >= len(g) and f:
            coef = f[-1] / g[-1]
            shift = len(f) - len(g)
            for i in range(len(g)):
                f[shift + i] -= coef * g[i]
            trim(f)
        f, g = g, f
    return len(f) - 1


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Gcd with integer content 1 and positive leading coefficient.

    Layered for speed: recognizable common factors are peeled off by trial
    division, coprimality of the rest is certified by degree-preserving
    specializations, and only then does the primitive PRS run.
    """
    if f.is_zero():
        return poly_primitive(g)
    if g.is_zero():
        return poly_primitive(f)
    if f.is_const() or g.is_const():
        return Poly.const(1)
    common = Poly.const(1)
    base = f if len(f.t) <= len(g.t) else g
    for fac in _nonzero_factors(base):
        if fac.is_const():
            continue
        while True:
            q1 = poly_exact_div(f, fac)
            if q1 is None:
                break
            q2 = poly_exact_div(g, fac)
            if q2 is None:
                break
            common = common * fac
            f, g = q1, q2
    if f.is_const() or g.is_const():
        return poly_primitive(common)
    syms = sorted(f.symbols() | g.symbols())
    if _coprime_by_evaluation(f, g, syms):
        return poly_primitive(common)
    return poly_primitive(common * _prs_gcd(f, g, syms))


def _prs_gcd(f: Poly, g: Poly, syms: list[str]) -> Poly:
    v = syms[0]
    fu, gu = _to_univar(f, v), _to_univar(g, v)
    cf, cg = _gcd_list(fu.values()), _gcd_list(gu.values())
    cont = poly_gcd(cf, cg)
    F = {e: poly_exact_div(c, cf) for e, c in fu.items()}
    G = {e: poly_exact_div(c, cg) for e, c in gu.items()}
    if max(F) < max(G):
        F, G = G, F
    while True:
        R = _pseudo_rem(F, G, v)
        if not R:
            pp = _univar_primitive(G, v)
            return cont * _from_univar(pp, v)
        if max(R) == 0:
            return cont
        F, G = G, _univar_primitive(R, v)


def _univar_primitive(u: dict, v: str) -> dict:
    c = _gcd_list(u.values())
    return {e: poly_exact_div(p, c) for e, p in u.items()}


def _pseudo_rem(F: dict, G: dict, v: str) -> dict:
    dg = max(G)
    lg = G[dg]
    R = dict(F)
    while R and max(R) >= dg:
        dr = max(R)
        lr = R[dr]
        # R <- lg*R - lr*v^(dr-dg)*G
        newR: dict = {}
        for e, c in R.items():
            newR[e] = c * lg
        for e, c in G.items():
            ne = e + dr - dg
            newR[ne] = newR.get(ne, Poly({})) - c * lr
        R = {e: c for e, c in newR.items() if not c.is_zero()}
    return R


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------


class Scalar:
    """Element of Q(parameters), possibly extended by formal square roots."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        self.num, self.den = _normalize(num, den)

    # -- constructors

    @staticmethod
    def rational(c) -> "Scalar":
        return Scalar(Poly.const(c), Poly.const(1))

    @staticmethod
    def zero() -> "Scalar":
        return Scalar(Poly({}), Poly.const(1))

    @staticmethod
    def one() -> "Scalar":
        return Scalar.rational(1)

    @staticmethod
    def param(name: str) -> "Scalar":
        if name not in _PARAMS and name not in _SQRT:
            raise UnboundParameter(f"parameter {name!r} was never declared")
        return Scalar(Poly.var(name), Poly.const(1))

    # -- queries

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_rational(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if self.num.is_zero():
            return Fraction(0)
        return self.num.const_value() / self.den.const_value()

    def symbols(self) -> set[str]:
        return self.num.symbols() | self.den.symbols()

    def parameters(self) -> set[str]:
        return {s for s in self.symbols() if s not in _SQRT}

    # -- arithmetic

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if other.is_zero():
            raise ZeroDivisionScalar("division by zero scalar")
        return Scalar(self.num * other.den, self.den * other.num)

    def inverse(self) -> "Scalar":
        return Scalar.one() / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- substitution

    def substitute(self, bindings: dict, assumptions: "AssumptionSet | None" = None) -> "Scalar":
        """Evaluate at rational parameter values; a field homomorphism.

        Every parameter must be bound; bindings may not kill the denominator
        or any registered nonzero assumption.  Square-root symbols cannot be
        substituted through.
        """
        for s in self.symbols():
            if s in _SQRT:
                raise UnboundParameter(f"cannot substitute under the radical {s!r}")
        if assumptions is not None:
            for p in assumptions.nonzero:
                try:
                    v = p.eval(bindings)
                except UnboundParameter:
                    continue
                if v == 0:
                    raise AssumptionViolated(f"binding makes assumed-nonzero {p} vanish")
        den = self.den.eval(bindings)
        if den == 0:
            raise DenominatorVanishes(f"denominator {self.den} vanishes")
        return Scalar.rational(self.num.eval(bindings) / den)

    def subs(self, mapping: dict) -> "Scalar":
        """Substitute parameter symbols by Scalars (partial substitution)."""
        num = self.num.subs(mapping)
        den = self.den.subs(mapping)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {self.den} vanishes under {mapping}")
        return num / den

    # -- display

    def __str__(self) -> str:
        if self.den == Poly.const(1):
            return str(self.num)
        num = str(self.num)
        if len(self.num.t) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.t) > 1 or not self.den.is_const():
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _normalize(num: Poly, den: Poly):
    if den.is_zero():
        raise ZeroDivisionScalar("zero denominator")
    if num.is_zero():
        return Poly({}), Poly.const(1)
    num, den = _sqrt_reduce(num), _sqrt_reduce(den)
    # Clear square-root symbols out of the denominator by conjugation.
    for s in sorted(sym for sym in den.symbols() if sym in _SQRT):
        a_terms, b_terms = {}, {}
        for m, c in den.t.items():
            d = dict(m)
            e = d.pop(s, 0)
            if e == 0:
                a_terms[m] = c
            else:
                b_terms[tuple(sorted(d.items()))] = c
        A, B = Poly(a_terms), Poly(b_terms)
        conj = A - B * Poly.var(s)
        new_den = A * A - B * B * _SQRT[s]
        if new_den.is_zero():
            raise ZeroDivisionScalar(f"{den} is a zero divisor in the sqrt extension")
        num = num * conj
        den = new_den
    if not den.is_const() and not num.is_const():
        g = poly_gcd(num, den)
        if not (g.is_const() and g.const_value() == 1):
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
    c = _frac_content(den)
    _, lc = den.lead()
    if lc < 0:
        c = -c
    return num.scale(1 / c), den.scale(1 / c)


# ---------------------------------------------------------------------------
# square roots
# ---------------------------------------------------------------------------


def _frac_sqrt(c: Fraction) -> Optional[Fraction]:
    if c < 0:
        return None
    rn, rd = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


def adjoin_sqrt(radicand: Scalar, assumptions: "AssumptionSet | None" = None) -> Scalar:
    """Return a Scalar s with s*s == radicand, adjoining a symbol if needed.

    Perfect-square rationals and even-exponent monomials are simplified
    directly; otherwise a fresh symbol is registered with the reduction rule
    s**2 -> radicand.  Nested radicals are rejected.
    """
    if radicand.is_zero():
        raise ZeroRadicand("radicand is zero")
    if assumptions is not None and assumptions.decide(radicand.num) == "zero":
        raise ZeroRadicand("radicand is zero under assumptions")
    r = radicand.num * radicand.den
    if r.has_sqrt():
        raise SqrtTowerTooDeep("nested square roots are not supported")
    if len(r.t) == 1:
        (mono, coeff), = r.t.items()
        if all(e % 2 == 0 for _, e in mono):
            c = _frac_sqrt(coeff)
            if c is not None:
                half = tuple((s, e // 2) for s, e in mono)
                return Scalar(Poly({half: c}), radicand.den)
    for name, rad in _SQRT.items():
        if rad == r:
            return Scalar(Poly.var(name), radicand.den)
    _SQRT_COUNTER[0] += 1
    name = f"sqrt_{_SQRT_COUNTER[0]}"
    _SQRT[name] = r
    return Scalar(Poly.var(name), radicand.den)


# ---------------------------------------------------------------------------
# assumptions
# ---------------------------------------------------------------------------


class Assumption:
    """A side condition: a normal-form polynomial known nonzero or zero."""

    __slots__ = ("poly", "kind")

    def __init__(self, poly: Poly, kind: str):
        assert kind in ("nonzero", "zero")
        self.poly, self.kind = poly, kind

    def __str__(self):
        op = "!=" if self.kind == "nonzero" else "=="
        return f"{self.poly} {op} 0"

    def __repr__(self):
        return f"Assumption({self})"

    def __eq__(self, other):
        return isinstance(other, Assumption) and self.poly == other.poly and self.kind == other.kind

    def __hash__(self):
        return hash((self.poly, self.kind))


class AssumptionSet:
    """Immutable set of nonzero polynomials plus zero-branch bindings.

    Zero facts are carried as parameter bindings (the solvers substitute them
    eagerly), so ``decide`` only has to separate nonzero from unknown.
    """

    __slots__ = ("nonzero", "bindings")

    def __init__(self, nonzero=(), bindings=()):
        self.nonzero = tuple(nonzero)
        self.bindings = tuple(bindings)

    @staticmethod
    def empty() -> "AssumptionSet":
        return AssumptionSet()

    def assuming_nonzero(self, value) -> "AssumptionSet":
        polys = list(self.nonzero)
        for p in _nonzero_factors(value):
            if p.is_const():
                if p.const_value() == 0:
                    raise InfeasibleBranch("assuming 0 != 0")
                continue
            if p not in polys:
                polys.append(p)
        return AssumptionSet(polys, self.bindings)

    def with_binding(self, param: str, value: Scalar) -> "AssumptionSet":
        """Record param := value; prunes branches contradicting nonzero facts."""
        mapping = {param: value}
        new_nonzero = []
        for p in self.nonzero:
            q = p.subs(mapping)
            if q.is_zero():
                raise InfeasibleBranch(f"binding {param}={value} kills {p} != 0")
            for f in _nonzero_factors(q):
                if not f.is_const() and f not in new_nonzero:
                    new_nonzero.append(f)
        out = AssumptionSet(new_nonzero, self.bindings + ((param, value),))
        return out

    def substitution(self) -> dict:
        return {p: v for p, v in self.bindings}

    def apply(self, s: Scalar) -> Scalar:
        if not self.bindings:
            return s
        return s.subs(self.substitution())

    def decide(self, poly: Poly) -> str:
        """'zero', 'nonzero' or 'unknown' for a binding-reduced polynomial."""
        if poly.is_zero():
            return "zero"
        p = poly_primitive(poly)
        changed = True
        while changed and not p.is_const():
            changed = False
            for q in self.nonzero:
                quot = poly_exact_div(p, q)
                if quot is not None and not quot.is_zero():
                    p = poly_primitive(quot)
                    changed = True
                    break
            if not p.is_const():
                for s in sorted(p.symbols()):
                    if s in _SQRT:
                        rad = _SQRT[s]
                        if self.decide(rad) != "nonzero":
                            continue
                        quot = poly_exact_div(p, Poly.var(s))
                        if quot is not None:
                            p = poly_primitive(quot)
                            changed = True
                            break
        if p.is_const():
            return "nonzero"
        return "unknown"

    def decide_scalar(self, s: Scalar) -> str:
        return self.decide(s.num)

    def as_assumptions(self) -> list[Assumption]:
        out = [Assumption(p, "nonzero") for p in self.nonzero]
        for param, v in self.bindings:
            out.append(Assumption(Poly.var(param) * v.den - v.num, "zero"))
        return out

    def describe(self) -> list[str]:
        out = [f"{p} != 0" for p in self.nonzero]
        out += [f"{param} = {v}" for param, v in self.bindings]
        return out

    def __str__(self):
        items = self.describe()
        return "{" + ", ".join(items) + "}" if items else "{}"

    def __repr__(self):
        return f"AssumptionSet({self})"


def _nonzero_factors(value) -> list[Poly]:
    """Split a Scalar/Poly into primitive factors for tidy assumption storage."""
    p = value.num if isinstance(value, Scalar) else value
    if p.is_zero():
        raise InfeasibleBranch("assuming 0 != 0")
    p = poly_primitive(p)
    out = []
    # peel off single-symbol factors
    for s in sorted(p.symbols()):
        while True:
            q = poly_exact_div(p, Poly.var(s))
            if q is None:
                break
            out.append(poly_primitive(Poly.var(s)))
            p = poly_primitive(q)
    out.extend(_rational_root_factors(p))
    return out


def _rational_root_factors(p: Poly) -> list[Poly]:
    """Factor out (v - r) for rational roots when p is univariate; else [p]."""
    if p.is_const():
        return [p] if p.const_value() != 1 else []
    syms = sorted(p.symbols())
    if len(syms) != 1:
        ds = _square_difference_factors(p)
        if ds is not None:
            return ds
        return [p]
    v = syms[0]
    out = []
    while not p.is_const():
        root = _find_rational_root(p, v)
        if root is None:
            out.append(poly_primitive(p))
            break
        factor = Poly.var(v) - Poly.const(root)
        out.append(poly_primitive(factor))
        p = poly_exact_div(p, factor)
    return out


def _square_difference_factors(p: Poly) -> Optional[list[Poly]]:
    """Split m1^2 - m2^2 style binomials into (m1-m2)(m1+m2)."""
    if len(p.t) != 2:
        return None
    (m1, c1), (m2, c2) = sorted(p.t.items(), key=lambda kv: -kv[1])
    if c1 <= 0 or c2 >= 0:
        return None
    if any(e % 2 for _, e in m1) or any(e % 2 for _, e in m2):
        return None
    r1, r2 = _frac_sqrt(c1), _frac_sqrt(-c2)
    if r1 is None or r2 is None:
        return None
    h1 = Poly({tuple((s, e // 2) for s, e in m1): r1})
    h2 = Poly({tuple((s, e // 2) for s, e in m2): r2})
    return [poly_primitive(h1 - h2), poly_primitive(h1 + h2)]


_ROOT_SEARCH_BOUND = 10 ** 8


def _find_rational_root(p: Poly, v: str) -> Optional[Fraction]:
    u = _to_univar(p, v)
    if any(not c.is_const() for c in u.values()):
        return None
    if 0 not in u:
        return Fraction(0)
    coeffs = {e: c.const_value() for e, c in u.items()}
    den_lcm = 1
    for c in coeffs.values():
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ic = {e: int(c * den_lcm) for e, c in coeffs.items()}
    a0, an = ic[0], ic[max(ic)]
    if abs(a0) > _ROOT_SEARCH_BOUND or abs(an) > _ROOT_SEARCH_BOUND:
        return None  # outside the trial-division budget; leave unfactored
    for pnum in _divisors(abs(a0)):
        for pden in _divisors(abs(an)):
            for cand in (Fraction(pnum, pden), Fraction(-pnum, pden)):
                if p.eval({v: cand}) == 0:
                    return cand
    return None


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def substitute(s: Scalar, bindings: dict, assumptions: AssumptionSet | None = None) -> Scalar:
    """Module-level alias for Scalar.substitute."""
    return s.substitute(bindings, assumptions)
