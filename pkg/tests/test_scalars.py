from fractions import Fraction

import pytest

from ncaseed import errors
from ncaseed.scalars import (
    AssumptionSet,
    Scalar,
    adjoin_sqrt,
    declare_parameter,
    substitute,
)

from conftest import rand_scalar, rng_for


def s(v):
    return Scalar.rational(v)


def test_substitute_basic():
    a = declare_parameter("a")
    e = (a - s(1)) / (a + s(1))
    assert substitute(e, {"a": 3}).as_fraction() == Fraction(1, 2)


def test_substitute_inverse():
    a = declare_parameter("a")
    assert substitute(a * a.inverse(), {"a": 7}) == Scalar.one()


def test_substitute_guards():
    a, b = declare_parameter("a"), declare_parameter("b")
    asmp = AssumptionSet.empty().assuming_nonzero(a * a - b * b)
    with pytest.raises(errors.AssumptionViolated):
        substitute(a * a - b * b, {"a": 2, "b": 2}, asmp)
    with pytest.raises(errors.DenominatorVanishes):
        substitute(Scalar.one() / (a - s(1)), {"a": 1})
    with pytest.raises(errors.UnboundParameter):
        substitute(a + b, {"a": 1})


def test_adjoin_sqrt_reduction():
    lam = declare_parameter("lam")
    r = adjoin_sqrt(lam)
    assert (r * r - lam).is_zero()
    g = declare_parameter("g")
    t = adjoin_sqrt(g)
    assert (t ** 2) * g.inverse() == Scalar.one()


def test_adjoin_sqrt_perfect_squares():
    # rational and even-monomial radicands simplify outright; in particular
    # s*s - 4 normalizes to 0 because s is literally 2
    r = adjoin_sqrt(s(4))
    assert r == s(2)
    assert (r * r - s(4)).is_zero()
    a = declare_parameter("a")
    assert adjoin_sqrt(a * a * s(Fraction(9, 4))) == a * s(Fraction(3, 2))
    with pytest.raises(errors.ZeroRadicand):
        adjoin_sqrt(Scalar.zero())


def test_sqrt_substitution_sampling():
    # non-square radicands stay formal; sampled substitution of the square
    # agrees with the radicand value
    a = declare_parameter("a")
    r = adjoin_sqrt(a + s(1))
    sq = r * r
    for v in (1, 2, 5, Fraction(1, 3)):
        assert substitute(sq, {"a": v}).as_fraction() == Fraction(v) + 1


def test_field_axioms_random():
    rng = rng_for("field-axioms")
    params = ["a", "b", "c"]
    for p in params:
        declare_parameter(p)
    for _ in range(1000):
        x = rand_scalar(rng, params[: rng.randint(0, 3)], 2)
        y = rand_scalar(rng, params[: rng.randint(0, 3)], 2)
        z = rand_scalar(rng, params[: rng.randint(0, 3)], 2)
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x
        if not x.is_zero():
            assert x * x.inverse() == Scalar.one()


def test_normalize_equality_matches_cross_multiplication():
    rng = rng_for("cross-mult")
    declare_parameter("a")
    declare_parameter("b")
    for _ in range(300):
        x = rand_scalar(rng, ["a", "b"], 2)
        y = rand_scalar(rng, ["a", "b"], 2)
        cross = x.num * y.den - y.num * x.den
        assert (x == y) == cross.is_zero()


def test_substitute_is_homomorphism():
    rng = rng_for("subs-hom")
    declare_parameter("a")
    declare_parameter("b")
    checked = 0
    while checked < 500:
        x = rand_scalar(rng, ["a", "b"], 2)
        y = rand_scalar(rng, ["a", "b"], 2)
        binding = {"a": rng.randint(1, 9), "b": Fraction(rng.randint(1, 9), rng.randint(1, 5))}
        try:
            xv, yv = substitute(x, binding), substitute(y, binding)
            assert substitute(x + y, binding) == xv + yv
            assert substitute(x * y, binding) == xv * yv
            if not x.is_zero() and not xv.is_zero():
                assert substitute(x.inverse(), binding) == xv.inverse()
        except errors.DenominatorVanishes:
            continue
        checked += 1


def test_reserved_names_rejected():
    for bad in ("x", "y", "u0", "u1", "sqrt_1"):
        with pytest.raises(errors.ReservedSymbol):
            declare_parameter(bad)


def test_nested_sqrt_rejected():
    a = declare_parameter("a")
    r = adjoin_sqrt(a + s(3))
    with pytest.raises(errors.SqrtTowerTooDeep):
        adjoin_sqrt(r + s(1))


def test_assumption_set_factors_and_bindings():
    a, b = declare_parameter("a"), declare_parameter("b")
    asmp = AssumptionSet.empty().assuming_nonzero(a * a - b * b)
    assert asmp.decide((a - b).num) == "nonzero"
    assert asmp.decide((a + b).num) == "nonzero"
    bound = asmp.with_binding("b", Scalar.rational(0))
    assert bound.decide(a.num) == "nonzero"
    with pytest.raises(errors.InfeasibleBranch):
        asmp.assuming_nonzero(a - b).with_binding("b", a)
