import pytest

from ncaseed import errors
from ncaseed.geometry import (
    GeometricPair,
    Graph,
    HLine,
    Mobius,
    P_POINT,
    ProjPoint,
    Q_POINT,
    SigmaDatum,
    VLine,
    apply_sigma,
    catalog_E,
    catalog_sigma,
    enumerate_sigma_candidates,
    gamma_parametrization,
    intersection_points,
    is_G_automorphism,
    parse_pair_spec,
    transport,
)
from ncaseed.scalars import AssumptionSet, Scalar, declare_parameter

from conftest import rand_invertible, rng_for


def test_projpoint_canonical():
    p = ProjPoint(Scalar.rational(2), Scalar.rational(6))
    assert p == ProjPoint(Scalar.rational(1), Scalar.rational(3))
    with pytest.raises(errors.ZeroVector):
        ProjPoint(Scalar.zero(), Scalar.zero())


def test_catalog_E():
    assert catalog_E("S'") == [HLine(P_POINT), VLine(P_POINT),
                               Graph(Mobius.of_rationals(0, 1, 1, 0))]
    t1 = catalog_E("T'1")
    assert isinstance(t1[2], Graph)
    delta = Scalar.param("delta")
    assert t1[2].mobius.mat.d == delta
    assert catalog_E("FL") == [HLine(P_POINT), HLine(Q_POINT),
                               VLine(P_POINT), VLine(Q_POINT)]
    with pytest.raises(errors.UnknownType):
        catalog_E("nope")


def test_all_eight_catalog_families_are_automorphisms():
    count = 0
    for tag in ("S'", "T'1", "T'2", "FL"):
        for fam in catalog_sigma(tag):
            assert is_G_automorphism(fam), fam.pattern
            count += 1
    assert count == 8


def test_apply_sigma_reference_points():
    lam = declare_parameter("lam")
    alpha = Scalar.param("alpha")
    fam = catalog_sigma("S'")[0]
    image = apply_sigma(fam, 0, (ProjPoint(Scalar.one(), lam), P_POINT))
    assert image[0] == P_POINT
    assert image[1].cross(ProjPoint(Scalar.one(), alpha * lam)).is_zero()
    famfl = catalog_sigma("FL")[1]
    u = ProjPoint(Scalar.rational(3), Scalar.rational(5))
    image = apply_sigma(famfl, 2, (P_POINT, u))
    assert image == (u, Q_POINT)
    gid = GeometricPair([Graph(Mobius.identity())], [SigmaDatum(0)])
    pt = ProjPoint(Scalar.rational(2), Scalar.rational(7))
    assert gid.apply_sigma_point(0, (pt, pt)) == (pt, pt)
    with pytest.raises(errors.PointNotOnComponent):
        apply_sigma(fam, 0, (P_POINT, Q_POINT))


def test_mutated_families_fail():
    fl_i = catalog_sigma("FL")[0]
    fl_ii = catalog_sigma("FL")[1]
    sp = catalog_sigma("S'")[0]
    t2 = catalog_sigma("T'2")[0]
    mutants = [
        # FL(i) with V(P) sent to H(Q): breaks consistency at (P,P)
        GeometricPair(fl_i.components,
                      [fl_i.sigma[0], fl_i.sigma[1], SigmaDatum(1), SigmaDatum(0)],
                      "mut1", fl_i.assumptions),
        # FL(ii) with the vertical targets unswapped
        GeometricPair(fl_ii.components,
                      [fl_ii.sigma[0], fl_ii.sigma[1], SigmaDatum(0), SigmaDatum(1)],
                      "mut2", fl_ii.assumptions),
        # S'(i) with the graph sent to the hline (and hline to graph)
        GeometricPair(sp.components,
                      [sp.sigma[0], SigmaDatum(0), SigmaDatum(1)],
                      "mut3", sp.assumptions),
        # T'2(i) with vline and graph targets exchanged
        GeometricPair(t2.components,
                      [t2.sigma[0], SigmaDatum(2), SigmaDatum(1)],
                      "mut4", t2.assumptions),
        # FL(i) with both verticals aimed at the same hline (not a bijection)
        GeometricPair(fl_i.components,
                      [fl_i.sigma[0], fl_i.sigma[1], SigmaDatum(0), SigmaDatum(0)],
                      "mut5", fl_i.assumptions),
    ]
    for mut in mutants:
        assert not is_G_automorphism(mut), mut.pattern


def test_second_sprime_family_valid():
    fam = catalog_sigma("S'")[1]
    assert fam.pattern == "S'(ii)"
    assert is_G_automorphism(fam)


def test_transport_examples():
    tau = Mobius.of_rationals(0, 1, 1, 0)
    rho = Mobius.of_rationals(1, 2, 0, 1)
    pair = GeometricPair([Graph(tau)], [SigmaDatum(0)])
    moved = transport(pair, rho, rho)
    assert moved.components[0] == Graph(rho.compose(tau).compose(rho.inverse()))
    fam = catalog_sigma("S'")[0]
    same = transport(fam, Mobius.identity(), Mobius.identity())
    assert same.same_curve(fam)
    phi = Mobius.of_rationals(1, 0, 3, 1)
    gid = GeometricPair([Graph(Mobius.identity())], [SigmaDatum(0)])
    assert transport(gid, Mobius.identity(), phi).components[0] == Graph(phi)


def test_transport_functorial():
    rng = rng_for("transportfun")
    fam = catalog_sigma("FL")[0]
    for _ in range(25):
        t1, t2 = Mobius(rand_invertible(rng)), Mobius(rand_invertible(rng))
        r1, r2 = Mobius(rand_invertible(rng)), Mobius(rand_invertible(rng))
        once = transport(transport(fam, t1, t2), r1, r2)
        direct = transport(fam, r1.compose(t1), r2.compose(t2))
        assert once.same_curve(direct)


def test_gamma_parametrization():
    gid = GeometricPair([Graph(Mobius.identity())], [SigmaDatum(0)])
    (p, q, r), = gamma_parametrization(gid)
    assert p == q == r  # the diagonal triple (u, u, u)
    fam = catalog_sigma("S'")[0]
    tri = fam.gamma_triple(0)  # hline(P) component
    assert tri[1] == P_POINT.coords
    alpha = Scalar.param("alpha")
    u0, u1 = tri[0]
    assert tri[2] == (u0, alpha * u1)
    flfam = catalog_sigma("FL")[0]
    tri = flfam.gamma_triple(2)  # vline(P): (P, u, P)
    assert tri[0] == P_POINT.coords and tri[2] == P_POINT.coords


def test_truncated_quadrangle_has_no_candidates():
    comps = [HLine(P_POINT), HLine(Q_POINT), VLine(Q_POINT)]
    assert enumerate_sigma_candidates(comps) == []


def test_intersections():
    A = AssumptionSet.empty()
    pts = intersection_points(VLine(P_POINT), HLine(Q_POINT), A)
    assert pts == [(P_POINT, Q_POINT)]
    tau = Mobius.of_rationals(0, 1, 1, 0)
    pts = intersection_points(VLine(P_POINT), Graph(tau), A)
    assert pts == [(P_POINT, Q_POINT)]
    # graph-graph intersection through the fixed points of tau'^-1 tau
    pts = intersection_points(Graph(Mobius.identity()),
                              Graph(Mobius.of_rationals(1, 0, 0, 4)), A)
    assert sorted(str(p) for p, _ in pts) == ["[0,1]", "[1,0]"]


def test_pair_spec_round_trip():
    text = """
    # the triangle normal form with its diagonal automorphism family
    param aa
    assume aa
    component L1 hline [1,0]
    component L2 vline [1,0]
    component C  graph [[0,1],[1,0]]
    sigma L1 -> L2 [[1,0],[0,aa]]
    sigma L2 -> L1
    sigma C -> C
    """
    pair = parse_pair_spec(text)
    assert is_G_automorphism(pair)
    assert pair.same_curve(catalog_sigma("S'")[0])
    with pytest.raises(errors.InvalidPair):
        parse_pair_spec("component L1 hline [1,0]\n")
