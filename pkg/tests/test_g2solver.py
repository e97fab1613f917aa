from fractions import Fraction

import pytest
import sympy

from ncaseed import errors, linalg
from ncaseed.exprparse import parse_ncpoly
from ncaseed.freealg import coefficient_rows, words_of_degree
from ncaseed.g2solver import check_g2_membership, constraint_rows, relations_from_pair
from ncaseed.geometry import GeometricPair, SigmaDatum, catalog_sigma
from ncaseed.scalars import AssumptionSet, Scalar

from conftest import rng_for


def spans(rb, texts):
    expected = [parse_ncpoly(t).subs(rb.assumptions.substitution()) for t in texts]
    return linalg.span_equal(coefficient_rows(rb.basis, 3),
                             coefficient_rows(expected, 3), rb.assumptions)


def test_sprime_pattern_i():
    fam = catalog_sigma("S'")[0]
    out = relations_from_pair(fam)
    assert len(out) == 1 and out[0].dimension == 2
    assert spans(out[0], ["x^2*y - alpha*y*x^2 + (alpha-1)*y^3", "x*y^2 - y^2*x"])


def test_sprime_pattern_ii():
    fam = catalog_sigma("S'")[1]
    out = relations_from_pair(fam)
    assert len(out) == 1 and out[0].dimension == 2
    assert spans(out[0], ["alpha*x^3 - alpha*x*y^2 - y*x*y - alpha*y^2*x", "y^3"])


def test_t1_case_tree():
    out = relations_from_pair(catalog_sigma("T'1")[0])
    generic = [rb for rb in out if rb.dimension == 1]
    special = [rb for rb in out if rb.dimension == 2]
    assert len(generic) == 1 and len(special) == 1
    # the proof's branch variable: gamma = delta^2 carries the 2-dim family
    sub = dict(special[0].assumptions.bindings)
    assert str(sub["gamma"]) == "delta^2"
    assert spans(special[0],
                 ["x^2*y - delta^2*y*x^2 + alpha*y*x*y - alpha*delta*y^2*x",
                  "x*y^2 - delta^2*y^2*x"])
    assert spans(generic[0], ["x*y^2 - delta^2*y^2*x"])


def test_t2_case_tree():
    out = relations_from_pair(catalog_sigma("T'2")[0])
    special = [rb for rb in out if rb.dimension == 2]
    generic = [rb for rb in out if rb.dimension == 1]
    assert len(special) == 1 and len(generic) == 1
    assert spans(special[0],
                 ["x^2*y - y*x^2 + alpha*y*x*y + (2-alpha)*y^2*x + (alpha-2)*y^3",
                  "x*y^2 - y^2*x + 2*y^3"])
    assert spans(generic[0], ["x*y^2 - y^2*x + 2*y^3"])


def test_fl_patterns():
    out = relations_from_pair(catalog_sigma("FL")[0])
    assert len(out) == 1 and spans(out[0], ["x^2*y - alpha*y*x^2",
                                            "x*y^2 - beta*y^2*x"])
    out = relations_from_pair(catalog_sigma("FL")[1])
    assert len(out) == 1 and spans(out[0], ["y*x*y - alpha*x^3",
                                            "beta*x*y*x - y^3"])


def test_membership():
    fam = catalog_sigma("S'")[0]
    assert check_g2_membership(parse_ncpoly("x*y^2 - y^2*x"), fam)
    assert not check_g2_membership(parse_ncpoly("x^3"), fam)
    assert check_g2_membership(parse_ncpoly("x^3 - x^3"), fam)


def test_invalid_pair_rejected():
    fam = catalog_sigma("FL")[0]
    broken = GeometricPair(fam.components,
                           [fam.sigma[0], fam.sigma[1], SigmaDatum(0), SigmaDatum(0)],
                           "broken", fam.assumptions)
    with pytest.raises(errors.InvalidPair):
        relations_from_pair(broken)
    with pytest.raises(errors.InvalidPair):
        check_g2_membership(parse_ncpoly("x^3"), broken)


def _sympy_nullspace_basis(rows):
    mat = sympy.Matrix([[sympy.Rational(e.as_fraction()) for e in row] for row in rows])
    return mat.nullspace()


def test_sampled_rebindings_match_symbolic_solution():
    # re-solve numerically at random admissible parameter values and compare
    # with the substituted symbolic答案 via an independent sympy nullspace
    rng = rng_for("g2sample")
    fam = catalog_sigma("T'1")[0]
    symbolic = relations_from_pair(fam)
    special = next(rb for rb in symbolic if rb.dimension == 2)
    for _ in range(10):
        delta = Fraction(rng.randint(1, 9), rng.randint(1, 3))
        alpha = Fraction(rng.randint(-6, 6))
        binding = {"delta": Scalar.rational(delta),
                   "gamma": Scalar.rational(delta * delta),
                   "alpha": Scalar.rational(alpha)}
        inst = fam.subs(binding)
        inst = GeometricPair(inst.components, inst.sigma, inst.pattern,
                             AssumptionSet.empty())
        rows = constraint_rows(inst)
        null = _sympy_nullspace_basis(rows)
        assert len(null) == 2
        # the substituted symbolic basis spans the same space
        order = words_of_degree(3)
        sym_rows = [[c.as_fraction() for c in p.subs(binding).coeff_vector(order)]
                    for p in special.basis]
        stack = sympy.Matrix([list(v.T) for v in null] +
                             [[sympy.Rational(x) for x in r] for r in sym_rows])
        assert stack.rank() == 2
