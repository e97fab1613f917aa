"""Relation spaces of geometric algebras, by exact nullspace computation.

For a valid pair (E, sigma) the degree-3 relation space consists of the
tensors vanishing on every triple (p, q, (pi2 . sigma)(p, q)).  Each
component of E contributes a homogeneously parametrized triple; expanding a
generic tensor on the triple and equating all coefficients of the fresh
parameters to zero yields linear constraints, solved by elimination with
parametric case splits.
"""

from __future__ import annotations

from .errors import InvalidPair
from . import linalg
from .freealg import NCPoly, evaluate_multilinear, words_of_degree
from .geometry import GeometricPair, is_G_automorphism
from .scalars import AssumptionSet, Poly, Scalar


class RelationBasis:
    """A solved relation space: basis, branch assumptions, dimension."""

    __slots__ = ("basis", "assumptions", "dimension")

    def __init__(self, basis: list[NCPoly], assumptions: AssumptionSet):
        self.basis = list(basis)
        self.assumptions = assumptions
        self.dimension = len(self.basis)

    def __repr__(self):
        rels = "; ".join(str(p) for p in self.basis)
        return f"RelationBasis(dim {self.dimension} under {self.assumptions}: {rels})"


def _u_coefficients(value: Scalar) -> dict:
    """Split a Scalar into coefficients of u0^i u1^j (denominator is u-free)."""
    out: dict = {}
    for mono, c in value.num.t.items():
        d = dict(mono)
        i, j = d.pop("u0", 0), d.pop("u1", 0)
        rest = tuple(sorted(d.items()))
        key = (i, j)
        out.setdefault(key, Poly({}))
        out[key] = out[key] + Poly({rest: c})
    return {k: Scalar(p, value.den) for k, p in out.items() if not p.is_zero()}


def _word_value(word: str, triple) -> Scalar:
    v = Scalar.one()
    for slot, letter in enumerate(word):
        p0, p1 = triple[slot]
        v = v * (p0 if letter == "x" else p1)
    return v


def constraint_rows(pair: GeometricPair) -> list[list[Scalar]]:
    """Linear constraints on the 8 coefficients of a generic cubic tensor."""
    order = words_of_degree(3)
    rows = []
    for i in range(len(pair.components)):
        triple = pair.gamma_triple(i)
        per_word = [_u_coefficients(_word_value(w, triple)) for w in order]
        keys = sorted({k for d in per_word for k in d})
        for key in keys:
            rows.append([d.get(key, Scalar.zero()) for d in per_word])
    return rows


def relations_from_pair(
    pair: GeometricPair, assumptions: AssumptionSet | None = None
) -> list[RelationBasis]:
    """Case tree of relation-space bases for a geometric pair."""
    A = assumptions if assumptions is not None else pair.assumptions
    if not is_G_automorphism(pair, A):
        raise InvalidPair(f"{pair.pattern or pair} is not a geometric pair")
    rows = constraint_rows(pair)
    order = words_of_degree(3)
    out = []
    for br in linalg.nullspace_cases(rows, 8, A):
        basis = [
            NCPoly(3, {w: c for w, c in zip(order, vec)})
            for vec in br.value
        ]
        out.append(RelationBasis(basis, br.assumptions))
    return out


def check_g2_membership(
    f: NCPoly, pair: GeometricPair, assumptions: AssumptionSet | None = None
) -> bool:
    """Does f vanish identically on every component triple of the pair?"""
    A = assumptions if assumptions is not None else pair.assumptions
    if not is_G_automorphism(pair, A):
        raise InvalidPair(f"{pair.pattern or pair} is not a geometric pair")
    if f.is_zero():
        return True
    for i in range(len(pair.components)):
        triple = pair.gamma_triple(i)
        if not evaluate_multilinear(f, triple).is_zero():
            return False
    return True
