from fractions import Fraction

import pytest
import sympy

from ncaseed import errors
from ncaseed.exprparse import parse_matrix, parse_ncpoly
from ncaseed.freealg import (
    LinearMap2,
    NCPoly,
    evaluate_multilinear,
    left_derivative,
    right_derivative,
    rotate,
    slot_map,
    words_of_degree,
)
from ncaseed.scalars import Scalar

from conftest import rand_invertible, rand_ncpoly, rng_for

OMEGA_B = "x^2*y^2+x*y^2*x+y^2*x^2+y*x^2*y-2*x*y*x*y-2*y*x*y*x"


def w(text):
    return parse_ncpoly(text)


def rotate_oracle(p):
    # independent term-by-term rotation
    return NCPoly(p.degree, {word[-1] + word[:-1]: c for word, c in p.terms.items()})


def test_rotate_examples():
    assert rotate(w("x*y")) == w("y*x")
    wb = w(OMEGA_B)
    assert rotate(wb) == rotate_oracle(wb) == wb
    with pytest.raises(errors.DegreeTooSmall):
        rotate(w("x"))


def test_rotate_power_four_is_identity():
    rng = rng_for("rotate4")
    for _ in range(500):
        p = rand_ncpoly(rng, 4)
        q = p
        for _ in range(4):
            q = rotate(q)
        assert q == p
        assert rotate(p) == rotate_oracle(p)


def test_left_derivative_reference_values():
    wb = w(OMEGA_B)
    assert left_derivative(wb, "x") == w("x*y^2 + y^2*x - 2*y*x*y")
    assert left_derivative(wb, "y") == w("x^2*y + y*x^2 - 2*x*y*x")
    assert left_derivative(w("x*y^2"), "x") == w("y^2")
    assert left_derivative(w("x*y^2"), "y") == NCPoly.zero(2)


def strip_last_oracle(p, g):
    out = {}
    for word, c in p.terms.items():
        if word[-1] == g:
            out[word[:-1]] = out.get(word[:-1], Scalar.zero()) + c
    return NCPoly(p.degree - 1, out)


def test_right_derivative_oracle():
    wb = w(OMEGA_B)
    assert right_derivative(wb, "x") == strip_last_oracle(wb, "x") == w("x*y^2 + y^2*x - 2*y*x*y")
    assert right_derivative(wb, "y") == strip_last_oracle(wb, "y") == w("x^2*y + y*x^2 - 2*x*y*x")
    assert right_derivative(w("y^3"), "x") == NCPoly.zero(2)
    rng = rng_for("rightderiv")
    for _ in range(200):
        p = rand_ncpoly(rng, rng.randint(1, 5))
        for g in "xy":
            assert right_derivative(p, g) == strip_last_oracle(p, g)


def test_reconstruction_identities():
    rng = rng_for("reconstruct")
    x, y = NCPoly.generator("x"), NCPoly.generator("y")
    for _ in range(500):
        p = rand_ncpoly(rng, rng.randint(1, 5))
        assert x * left_derivative(p, "x") + y * left_derivative(p, "y") == p
        assert right_derivative(p, "x") * x + right_derivative(p, "y") * y == p


def test_slot_map_examples():
    ident = LinearMap2.identity()
    swap = parse_matrix("[[0,1],[1,0]]")
    assert slot_map(w("x*y"), [ident, ident]) == w("x*y")
    assert slot_map(w("x*y"), [swap, swap]) == w("y*x")
    with pytest.raises(errors.ArityMismatch):
        slot_map(w("x*y"), [ident])


def test_slot_map_generic_determinant_square():
    # applying one generic matrix to all four slots of the symmetric
    # double-conic tensor scales it by det^2 (the exponent is computed here,
    # not assumed)
    wb = w(OMEGA_B)
    th = parse_matrix("[[a,b],[c,d]]")
    image = slot_map(wb, [th, th, th, th])
    lam = image.proportional_to(wb)
    assert lam is not None
    assert lam == th.det() ** 2


def test_slot_map_composition_law():
    # generators transform contragrediently to points, so applying [A] then
    # [B] slotwise equals applying [A*B]
    rng = rng_for("slotcomp")
    for _ in range(100):
        p = rand_ncpoly(rng, rng.randint(1, 4))
        A = [rand_invertible(rng) for _ in range(p.degree)]
        B = [rand_invertible(rng) for _ in range(p.degree)]
        lhs = slot_map(slot_map(p, A), B)
        rhs = slot_map(p, [a * b for a, b in zip(A, B)])
        assert lhs == rhs


def _sympy_slot_map(p, maps):
    X, Y = sympy.symbols("X Y", commutative=False)
    total = sympy.S.Zero
    for word, coeff in p.terms.items():
        factor = sympy.Rational(coeff.as_fraction())
        prod = sympy.S.One
        for slot, letter in enumerate(word):
            m = maps[slot]
            a, b, c, d = (sympy.Rational(e.as_fraction()) for e in m.entries())
            prod = prod * ((a * X + b * Y) if letter == "x" else (c * X + d * Y))
        total = total + factor * prod
    return sympy.expand(total)


def _sympy_of(p):
    X, Y = sympy.symbols("X Y", commutative=False)
    total = sympy.S.Zero
    for word, coeff in p.terms.items():
        prod = sympy.S.One
        for letter in word:
            prod = prod * (X if letter == "x" else Y)
        total = total + sympy.Rational(coeff.as_fraction()) * prod
    return sympy.expand(total)


def test_slot_map_against_sympy_noncommutative():
    rng = rng_for("slotsympy")
    for _ in range(25):
        p = rand_ncpoly(rng, 3)
        maps = [rand_invertible(rng) for _ in range(3)]
        mine = _sympy_of(slot_map(p, maps))
        theirs = _sympy_slot_map(p, maps)
        assert sympy.expand(mine - theirs) == 0


def test_evaluate_multilinear_reference_values():
    a = Scalar.param("alpha")
    P = (Scalar.one(), Scalar.zero())
    Q = (Scalar.zero(), Scalar.one())
    assert evaluate_multilinear(w("y*x*y"), [Q, P, (Scalar.zero(), a)]) == a
    assert evaluate_multilinear(w("x^3"), [P, P, P]) == Scalar.one()
    one_one = (Scalar.one(), Scalar.one())
    v = evaluate_multilinear(w("x^2*y - y*x^2"), [one_one, P, (Scalar.zero(), a)])
    assert v == a
    with pytest.raises(errors.ZeroVector):
        evaluate_multilinear(w("x*y"), [P, (Scalar.zero(), Scalar.zero())])


def test_evaluate_multilinear_is_multilinear():
    rng = rng_for("multilinear")
    for _ in range(50):
        p = rand_ncpoly(rng, 3)
        pts = [(Scalar.rational(rng.randint(1, 5)), Scalar.rational(rng.randint(-4, 4)))
               for _ in range(3)]
        base = evaluate_multilinear(p, pts)
        slot = rng.randrange(3)
        c = Scalar.rational(Fraction(rng.randint(1, 7), rng.randint(1, 3)))
        scaled = list(pts)
        scaled[slot] = (pts[slot][0] * c, pts[slot][1] * c)
        assert evaluate_multilinear(p, scaled) == base * c


def test_rotate_preserves_coefficient_sum():
    rng = rng_for("rotsum")
    for _ in range(100):
        p = rand_ncpoly(rng, 4)
        total = Scalar.zero()
        for c in p.terms.values():
            total = total + c
        rtotal = Scalar.zero()
        for c in rotate(p).terms.values():
            rtotal = rtotal + c
        assert total == rtotal
        assert sorted(words_of_degree(4)) == words_of_degree(4)
