"""Superpotential calculus for degree-4 tensors on two generators.

Twisted-superpotential detection follows the constructive span criterion:
a nonzero degree-4 tensor w is twisted iff the span of its left partial
derivatives equals the span of its right partial derivatives, and a twisting
matrix can be assembled from the change-of-basis coefficients (with five
degenerate branches when the derivatives are dependent).
"""

from __future__ import annotations

from typing import Optional

from . import linalg
from .errors import (
    CaseSplitRequired,
    DependentRelations,
    NoPotential,
    NoSolution,
    NotStandard,
    NotTwistedSuperpotential,
    SingularMatrix,
    WrongDegree,
    ZeroInput,
)
from .freealg import (
    LinearMap2,
    NCPoly,
    coefficient_rows,
    left_derivative,
    right_derivative,
    rotate,
    slot_map,
    words_of_degree,
)
from .linalg import Branch
from .scalars import AssumptionSet, Scalar


def _check_deg4(omega: NCPoly):
    if omega.degree != 4:
        raise WrongDegree(f"expected degree 4, got {omega.degree}")
    if omega.is_zero():
        raise ZeroInput("zero tensor")


def is_superpotential(omega: NCPoly) -> bool:
    """True iff the tensor is fixed by the cyclic rotation."""
    _check_deg4(omega)
    return rotate(omega) == omega


def ms_twist(omega: NCPoly, theta: LinearMap2) -> NCPoly:
    """Twist by theta: apply theta^3, theta^2, theta, id across the slots."""
    if theta.det().is_zero():
        raise SingularMatrix("twisting by a singular matrix")
    return slot_map(omega, [theta ** 3, theta ** 2, theta, LinearMap2.identity()])


def aut_membership(omega: NCPoly, theta: LinearMap2) -> Optional[Scalar]:
    """The scalar lam with theta applied to all four slots scaling omega, if any."""
    _check_deg4(omega)
    if theta.det().is_zero():
        raise SingularMatrix("singular matrix cannot be a symmetry")
    image = slot_map(omega, [theta, theta, theta, theta])
    return image.proportional_to(omega)


def derivation_quotient(omega: NCPoly):
    """The two defining relations of D(omega): its left partial derivatives."""
    if omega.is_zero():
        raise ZeroInput("zero tensor")
    return left_derivative(omega, "x"), left_derivative(omega, "y")


def m_matrix(omega: NCPoly):
    """2x2 matrix with entry (i,j) the j-th right derivative of the i-th left one."""
    if omega.is_zero():
        raise ZeroInput("zero tensor")
    dx, dy = left_derivative(omega, "x"), left_derivative(omega, "y")
    return [
        [right_derivative(dx, "x"), right_derivative(dx, "y")],
        [right_derivative(dy, "x"), right_derivative(dy, "y")],
    ]


def _tsp_identity_holds(omega: NCPoly, theta: LinearMap2) -> bool:
    rotated = rotate(omega)
    ident = LinearMap2.identity()
    return slot_map(rotated, [theta, ident, ident, ident]) == omega


def twisting_matrix(
    omega: NCPoly, assumptions: AssumptionSet | None = None
) -> Optional[LinearMap2]:
    """A matrix theta certifying that omega is a twisted superpotential.

    Returns None when the left/right derivative spans differ.  One witness is
    returned; uniqueness is not claimed.  Raises CaseSplitRequired when the
    span comparison depends on parameter values.
    """
    _check_deg4(omega)
    A = assumptions if assumptions is not None else AssumptionSet.empty()
    dx, dy = left_derivative(omega, "x"), left_derivative(omega, "y")
    rx, ry = right_derivative(omega, "x"), right_derivative(omega, "y")
    order = words_of_degree(3)
    d_rows = coefficient_rows([dx, dy], 3)
    if linalg.rank(d_rows, A) == 2:
        a_rows = [[rx.coeff(w), ry.coeff(w)] for w in order]
        sol_x = linalg.solve_unique(a_rows, [dx.coeff(w) for w in order], A)
        sol_y = linalg.solve_unique(a_rows, [dy.coeff(w) for w in order], A)
        if sol_x is None or sol_y is None:
            return None
        a, b = sol_x
        c, d = sol_y
        theta = LinearMap2(a, c, b, d)
    else:
        theta = _twisting_matrix_degenerate(omega, dx, dy, rx, ry, A)
        if theta is None:
            return None
    if theta.det().is_zero() or not _tsp_identity_holds(omega, theta):
        raise NoSolution(f"internal: assembled twisting matrix fails for {omega}")
    return theta


def _twisting_matrix_degenerate(omega, dx, dy, rx, ry, A):
    """Dependent-derivative branches of the span criterion."""
    if dx.is_zero() and dy.is_zero():
        raise ZeroInput("tensor with vanishing derivatives")
    if not dx.is_zero():
        base = dx
        if dy.is_zero():
            eps = (Scalar.one(), Scalar.zero())
        else:
            al = dy.proportional_to(base)
            if al is None:
                raise NoSolution("internal: derivatives neither independent nor proportional")
            eps = (Scalar.one(), al)
    else:
        base = dy
        eps = (Scalar.zero(), Scalar.one())

    lam = _proportion_or_none(rx, base)
    mu = _proportion_or_none(ry, base)
    if lam is None or mu is None:
        return None  # right span leaves the line spanned by the left derivatives

    lam_status = A.decide_scalar(lam) if not lam.is_zero() else "zero"
    if lam_status == "unknown":
        raise CaseSplitRequired(lam.num)
    ex_nonzero = not eps[0].is_zero()
    if lam_status == "nonzero":
        r2 = (Scalar.zero(), Scalar.one()) if ex_nonzero else (Scalar.one(), Scalar.zero())
        r1 = (
            (eps[0] - mu * r2[0]) / lam,
            (eps[1] - mu * r2[1]) / lam,
        )
    else:
        mu_status = A.decide_scalar(mu) if not mu.is_zero() else "zero"
        if mu_status == "unknown":
            raise CaseSplitRequired(mu.num)
        if mu_status == "zero":
            return None  # rx = ry = 0 is impossible for nonzero omega
        r2 = (eps[0] / mu, eps[1] / mu)
        r1 = (Scalar.zero(), Scalar.one()) if ex_nonzero else (Scalar.one(), Scalar.zero())
    return LinearMap2(r1[0], r1[1], r2[0], r2[1])


def _proportion_or_none(p: NCPoly, base: NCPoly) -> Optional[Scalar]:
    if p.is_zero():
        return Scalar.zero()
    return p.proportional_to(base)


def is_standard(omega: NCPoly, assumptions: AssumptionSet | None = None) -> bool:
    """For a twisted superpotential: are the two left derivatives independent?"""
    A = assumptions if assumptions is not None else AssumptionSet.empty()
    if twisting_matrix(omega, A) is None:
        raise NotTwistedSuperpotential(f"{omega} is not a twisted superpotential")
    dx, dy = derivation_quotient(omega)
    return linalg.rank(coefficient_rows([dx, dy], 3), A) == 2


def recover_Q(
    omega: NCPoly, assumptions: AssumptionSet | None = None
) -> Optional[LinearMap2]:
    """Solve (x^t M)^t = Q g for the standard-form witness Q."""
    A = assumptions if assumptions is not None else AssumptionSet.empty()
    if not is_standard(omega, A):
        raise NotStandard(f"{omega} is not standard")
    dx, dy = derivation_quotient(omega)
    M = m_matrix(omega)
    x, y = NCPoly.generator("x"), NCPoly.generator("y")
    lhs1 = x * M[0][0] + y * M[1][0]
    lhs2 = x * M[0][1] + y * M[1][1]
    order = words_of_degree(3)
    a_rows = [[dx.coeff(w), dy.coeff(w)] for w in order]
    row1 = linalg.solve_unique(a_rows, [lhs1.coeff(w) for w in order], A)
    row2 = linalg.solve_unique(a_rows, [lhs2.coeff(w) for w in order], A)
    if row1 is None or row2 is None:
        raise NoSolution("no Q solves the standardness identity")
    Q = LinearMap2(row1[0], row1[1], row2[0], row2[1])
    if Q.det().is_zero():
        raise NoSolution("standardness witness is singular")
    return Q


# ---------------------------------------------------------------------------
# potentials from relations
# ---------------------------------------------------------------------------


def potential_from_relations(
    g1: NCPoly, g2: NCPoly, assumptions: AssumptionSet | None = None
) -> list[Branch]:
    """Find omega = a*x*g1 + b*x*g2 + c*y*g1 + d*y*g2 that is twisted.

    Returns one Branch per parameter-case with a solution; the branch value
    is (omega, coefficient_matrix) where the 2x2 coefficient matrix
    (a b; c d) is invertible so that D(omega) has relations spanning
    {g1, g2}.  Raises NoPotential when no branch admits a solution.
    """
    if g1.degree != 3 or g2.degree != 3:
        raise WrongDegree("relations must have degree 3")
    A = assumptions if assumptions is not None else AssumptionSet.empty()
    if linalg.rank(coefficient_rows([g1, g2], 3), A) != 2:
        raise DependentRelations("relations are linearly dependent")

    x, y = NCPoly.generator("x"), NCPoly.generator("y")
    gens = [x * g1, x * g2, y * g1, y * g2]
    rx = [right_derivative(p, "x") for p in gens]
    ry = [right_derivative(p, "y") for p in gens]
    order = words_of_degree(3)

    # unknowns: a, b, c, d, s1, t1, s2, t2
    rows = []
    for w in order:
        rows.append([q.coeff(w) for q in rx] + [-g1.coeff(w), -g2.coeff(w)]
                    + [Scalar.zero(), Scalar.zero()])
    for w in order:
        rows.append([q.coeff(w) for q in ry] + [Scalar.zero(), Scalar.zero()]
                    + [-g1.coeff(w), -g2.coeff(w)])

    out = []
    for br in linalg.nullspace_cases(rows, 8, A):
        proj = [v[:4] for v in br.value]
        proj = linalg.rref(proj, br.assumptions)
        if not proj:
            continue
        for sub in linalg.case_split(
            lambda asmp, pr=proj, g1b=g1, g2b=g2: _pick_invertible(pr, g1b, g2b, asmp),
            br.assumptions,
        ):
            if sub.value is not None:
                out.append(Branch(sub.assumptions, sub.value))
    if not out:
        raise NoPotential(f"no twisted potential has relations ({g1}, {g2})")
    return out


def _pick_invertible(proj, g1, g2, asmp):
    """Find a vector in the projected solution space with invertible (a b; c d).

    The determinant is a quadratic form on the space, so testing the basis
    vectors and their pairwise sums decides whether it vanishes identically.
    """
    g1s, g2s = g1.subs(asmp.substitution()), g2.subs(asmp.substitution())
    candidates = [list(v) for v in proj]
    for i in range(len(proj)):
        for j in range(i + 1, len(proj)):
            candidates.append([proj[i][k] + proj[j][k] for k in range(4)])
    for v in candidates:
        v = [asmp.apply(e) for e in v]
        a, b, c, d = v
        det = a * d - b * c
        if det.is_zero():
            continue
        status = asmp.decide_scalar(det)
        if status == "unknown":
            raise CaseSplitRequired(det.num)
        if status == "nonzero":
            x, yg = NCPoly.generator("x"), NCPoly.generator("y")
            omega = (x * g1s).scale(a) + (x * g2s).scale(b) \
                + (yg * g1s).scale(c) + (yg * g2s).scale(d)
            if twisting_matrix(omega, asmp) is None:
                continue
            return omega, LinearMap2(a, b, c, d)
    return None
