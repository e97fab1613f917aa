from fractions import Fraction

import pytest

from ncaseed import errors, linalg
from ncaseed.classify import (
    AlgebraInstance,
    MobiusSequence,
    graphs_two_equivalent_line_fixing,
    iso_condition,
    morita_condition,
    pgl2_conjugate,
    proof_sequences,
    reproduce_table,
    stabilizer_family,
    type_separation_checks,
    verify_morita_sequence,
    wl_catalog,
    wl_iso_condition,
    _symbolic_conditions,
)
from ncaseed.exprparse import parse_ncpoly
from ncaseed.freealg import LinearMap2, coefficient_rows
from ncaseed.geometry import Mobius
from ncaseed.scalars import AssumptionSet, Scalar, declare_parameter

from conftest import rng_for


def test_stabilizer_families():
    fams = stabilizer_family("C_id")
    assert len(fams) == 1 and str(fams[0]) == "[[1,beta],[0,delta]]"
    fams = stabilizer_family("C_tau11")
    assert str(fams[0]) == "[[1,beta],[0,1]]"
    fams = stabilizer_family("quadrangle")
    assert [str(m) for m in fams] == ["[[1,0],[0,delta]]", "[[0,1],[gamma,0]]"]
    with pytest.raises(errors.UnknownType):
        stabilizer_family("S'").pop()


def test_iso_reference_pairs():
    res = iso_condition(AlgebraInstance("FL1", {"alpha": 2}),
                        AlgebraInstance("FL1", {"alpha": Fraction(-1, 2)}))
    assert bool(res) and res.witness is not None
    res = iso_condition(AlgebraInstance("FL2", {"alpha": 1, "beta": 2}),
                        AlgebraInstance("FL2", {"alpha": 3, "beta": 6}))
    assert bool(res) and res.witness is not None
    res = iso_condition(AlgebraInstance("T'2", {"alpha": 0}),
                        AlgebraInstance("T'2", {"alpha": 1}))
    assert not bool(res)
    # cross-type pairs are never isomorphic
    assert not bool(iso_condition(AlgebraInstance("FL1", {"alpha": 2}),
                                  AlgebraInstance("T'2", {"alpha": 2})))


def test_symbolic_conditions_match_closed_forms():
    assert _symbolic_conditions("T'2") == [["alpha - alphap"]]
    assert _symbolic_conditions("FL1") == [["alpha - alphap"], ["alpha*alphap + 1"]]
    assert _symbolic_conditions("FL2") == [["alpha*betap - alphap*beta"],
                                           ["alpha*betap - alphap*beta"]]


def test_iso_is_equivalence_relation_on_samples():
    rng = rng_for("iso-equiv")
    pools = {
        "T'2": lambda: {"alpha": Fraction(rng.randint(-3, 3))},
        "FL1": lambda: {"alpha": Fraction(rng.choice([1, -1, 2, -2, 3]),
                                          rng.choice([1, 2, 3]))},
        "FL2": lambda: {"alpha": Fraction(rng.choice([1, 2, 3, -1])),
                        "beta": Fraction(rng.choice([1, 2, -2, 6]))},
    }
    for tag, gen in pools.items():
        for _ in range(100):
            try:
                a = AlgebraInstance(tag, gen())
                b = AlgebraInstance(tag, gen())
                c = AlgebraInstance(tag, gen())
            except errors.TypeMismatch:
                continue
            ab = bool(iso_condition(a, b, want_witness=False))
            assert bool(iso_condition(a, a, want_witness=False))
            assert ab == bool(iso_condition(b, a, want_witness=False))
            if ab and bool(iso_condition(b, c, want_witness=False)):
                assert bool(iso_condition(a, c, want_witness=False))


def test_iso_implies_morita():
    pairs = [
        (AlgebraInstance("FL1", {"alpha": 2}), AlgebraInstance("FL1", {"alpha": Fraction(-1, 2)})),
        (AlgebraInstance("FL2", {"alpha": 1, "beta": 2}), AlgebraInstance("FL2", {"alpha": 2, "beta": 4})),
        (AlgebraInstance("T'2", {"alpha": 5}), AlgebraInstance("T'2", {"alpha": 5})),
        (AlgebraInstance("WL1", {"alpha": 3}), AlgebraInstance("WL1", {"alpha": Fraction(1, 3)})),
    ]
    for a, b in pairs:
        if bool(iso_condition(a, b, want_witness=False)):
            assert morita_condition(a, b)


def test_morita_reference_pairs():
    a = AlgebraInstance("FL2", {"alpha": 1, "beta": 2})
    assert morita_condition(a, AlgebraInstance("FL2", {"alpha": 2, "beta": 1}))
    assert not morita_condition(a, AlgebraInstance("FL2", {"alpha": 1, "beta": 3}))
    assert morita_condition(a, a)
    # FL1 collapses onto the FL2(1,-1) class
    for v in (1, 3, Fraction(-1, 2)):
        fl1 = AlgebraInstance("FL1", {"alpha": v})
        assert morita_condition(fl1, AlgebraInstance("FL2", {"alpha": 1, "beta": -1}))
        assert not morita_condition(fl1, AlgebraInstance("FL2", {"alpha": 1, "beta": 2}))
    # merged T' family
    assert morita_condition(AlgebraInstance("T'1", {"alpha": 1}),
                            AlgebraInstance("T'2", {"alpha": 0}))
    assert not morita_condition(AlgebraInstance("T'1", {"alpha": 1}),
                                AlgebraInstance("S'"))


def test_proof_sequences_verify():
    for name, a, b, seq in proof_sequences():
        assert verify_morita_sequence(a, b, seq), name


def test_sequence_failure_detected():
    seqs = proof_sequences()
    name, a, b, seq = seqs[0]  # the T'1 -> T'2(0) bridge
    wrong_b = AlgebraInstance("T'2", {"alpha": 1})
    assert not verify_morita_sequence(a, wrong_b, seq)


def test_sequence_invertibility_guard():
    declare_parameter("idx")
    idx = Scalar.param("idx")
    # determinant idx - 3 vanishes at the integer index 3
    mat = LinearMap2(Scalar.one(), Scalar.zero(), Scalar.zero(),
                     idx - Scalar.rational(3))
    seq = MobiusSequence.from_index_formula(mat)
    with pytest.raises(errors.InvalidSequence):
        seq.check_invertible()


def test_wl_catalog():
    cat = wl_catalog()
    assert cat["omega_B"] == parse_ncpoly(
        "x^2*y^2+x*y^2*x+y^2*x^2+y*x^2*y-2*x*y*x*y-2*y*x*y*x")
    assert [str(p) for p in cat["TWL"]] == ["x*y^2 + y^2*x", "x^2*y + y*x^2 + y^3"]
    # B2 matches its catalog row exactly
    expected = [parse_ncpoly("x*y^2+y^2*x-2*y*x*y"),
                parse_ncpoly("x^2*y+y*x^2-2*x*y*x+4*x*y^2-4*y*x*y+2*y^3")]
    assert linalg.span_equal(coefficient_rows(list(cat["B2"]), 3),
                             coefficient_rows(expected, 3), AssumptionSet.empty())


def test_wl_iso_condition_is_pgl2_conjugacy():
    rng = rng_for("wlconj")
    for _ in range(20):
        v = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        if v == 1:
            continue
        assert wl_iso_condition(v, v)
        assert wl_iso_condition(v, 1 / v)
        assert not wl_iso_condition(v, v + 1)
    assert pgl2_conjugate(Mobius.identity(), Mobius.identity())
    assert not pgl2_conjugate(Mobius.identity(), Mobius.of_rationals(1, 1, 0, 1))


def test_type_separation():
    for name, equivalent in type_separation_checks():
        assert not equivalent, name
    # sanity: a curve is 2-equivalent to itself under the line-fixing family
    assert graphs_two_equivalent_line_fixing(Mobius.identity(), Mobius.identity())


def test_instance_condition_guard():
    with pytest.raises(errors.TypeMismatch):
        AlgebraInstance("FL1", {"alpha": 0})
    with pytest.raises(errors.TypeMismatch):
        AlgebraInstance("FL2", {"alpha": 0, "beta": 1})
    with pytest.raises(errors.TypeMismatch):
        AlgebraInstance("T'1", {"alpha": 0})


def test_reproduce_tables_all_pass():
    for tid in ("1", "2", "3", "4", "ISOM", "GME"):
        rep = reproduce_table(tid)
        assert rep.passed, rep.summary()
        payload = rep.to_dict()
        assert payload["table"] == tid
        assert all(set(r) == {"table", "row", "status", "details",
                              "assumptionsUsed", "witnesses"}
                   for r in payload["rows"])
