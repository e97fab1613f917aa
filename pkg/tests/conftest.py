import random
from fractions import Fraction

import pytest

from ncaseed.freealg import LinearMap2, NCPoly, words_of_degree
from ncaseed.scalars import Scalar, declare_parameter


@pytest.fixture(scope="session", autouse=True)
def base_parameters():
    for name in ("alpha", "beta", "gamma", "delta", "a", "b", "c", "d", "lam"):
        declare_parameter(name)


def rand_fraction(rng, span=6):
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def rand_poly_scalar(rng, params, max_terms=3, max_deg=2):
    """Random polynomial Scalar in the given parameter names."""
    total = Scalar.zero()
    for _ in range(rng.randint(1, max_terms)):
        term = Scalar.rational(rand_fraction(rng))
        for p in params:
            for _ in range(rng.randint(0, max_deg)):
                term = term * Scalar.param(p)
        total = total + term
    return total


def rand_scalar(rng, params, max_terms=3):
    num = rand_poly_scalar(rng, params, max_terms)
    while True:
        den = rand_poly_scalar(rng, params, 2, 1)
        if not den.is_zero():
            return num / den


def rand_ncpoly(rng, degree, max_terms=4):
    words = words_of_degree(degree)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = words[rng.randrange(len(words))]
        terms[w] = Scalar.rational(rand_fraction(rng))
    return NCPoly(degree, terms)


def rand_invertible(rng, span=4):
    while True:
        m = LinearMap2.of_rationals(*(rng.randint(-span, span) for _ in range(4)))
        if not m.det().is_zero():
            return m


def rng_for(name):
    return random.Random(hash(name) % (2 ** 32))
