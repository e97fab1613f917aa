import pytest

from ncaseed import errors
from ncaseed.exprparse import parse_matrix, parse_ncpoly, parse_point, parse_scalar
from ncaseed.freealg import LinearMap2, NCPoly
from ncaseed.scalars import Scalar

from conftest import rand_ncpoly, rand_scalar, rng_for


def test_catalog_relation_parses():
    g1 = parse_ncpoly("x^2*y - a*y*x^2 + (a-1)*y^3")
    a = Scalar.param("a")
    assert g1.coeff("xxy") == Scalar.one()
    assert g1.coeff("yxx") == -a
    assert g1.coeff("yyy") == a - Scalar.one()


def test_simple_commutator():
    p = parse_ncpoly("x*y - y*x")
    assert p.coeff("xy") == Scalar.one()
    assert p.coeff("yx") == -Scalar.one()


def test_mixed_degree_rejected():
    with pytest.raises(errors.MixedDegree):
        parse_ncpoly("x^2 + y^3")


def test_syntax_errors_carry_position():
    with pytest.raises(errors.ExprSyntaxError) as exc:
        parse_ncpoly("x + @")
    assert exc.value.position == 4
    with pytest.raises(errors.ExprSyntaxError):
        parse_ncpoly("(x*y)^2")  # powers of words stay rejected
    with pytest.raises(errors.ExprSyntaxError):
        parse_ncpoly("x y")  # juxtaposition requires '*'


def test_unknown_symbol():
    with pytest.raises(errors.UnknownSymbol):
        parse_ncpoly("qz*x")


def test_precedence():
    assert parse_ncpoly("-x^2") == -parse_ncpoly("x^2")
    assert parse_ncpoly("2*x+3*x") == parse_ncpoly("5*x")
    assert parse_ncpoly("x^2*y") == (NCPoly.generator("x") * NCPoly.generator("x")
                                     * NCPoly.generator("y"))
    # scalar division binds like multiplication, left to right
    assert parse_scalar("(a-1)/(2*a)") == (Scalar.param("a") - Scalar.one()) / \
        (Scalar.rational(2) * Scalar.param("a"))


def test_matrices():
    m = parse_matrix("[[1,0],[0,a]]")
    assert m.entries() == (Scalar.one(), Scalar.zero(), Scalar.zero(), Scalar.param("a"))
    assert parse_matrix("[[0,1],[1,0]]") == LinearMap2.of_rationals(0, 1, 1, 0)
    assert parse_matrix("[[1,1],[0,1]]") == LinearMap2.of_rationals(1, 1, 0, 1)
    with pytest.raises(errors.NonScalarEntry):
        parse_matrix("[[x,0],[0,1]]")
    assert parse_point("[1,0]") == (Scalar.one(), Scalar.zero())


def test_round_trip_random():
    rng = rng_for("roundtrip")
    for _ in range(500):
        p = rand_ncpoly(rng, rng.randint(0, 5), max_terms=5)
        if p.is_zero():  # "0" carries no degree information
            assert parse_ncpoly(str(p)).is_zero()
        else:
            assert parse_ncpoly(str(p)) == p


def test_round_trip_parametric_coefficients():
    rng = rng_for("roundtrip-params")
    for _ in range(100):
        terms = {}
        degree = rng.randint(1, 4)
        p = rand_ncpoly(rng, degree, max_terms=3)
        for w in list(p.terms):
            terms[w] = rand_scalar(rng, ["a", "b"], 2)
        q = NCPoly(degree, terms)
        if q.is_zero():
            continue
        assert parse_ncpoly(str(q)) == q
