"""Exact linear algebra over the parameter field, with automatic case splits.

Pivot choices during elimination must be *decided* nonzero under the active
assumption set.  When a candidate pivot's status is unknown the solver forks:
one branch assumes the pivot polynomial nonzero, the others bind a parameter
so the pivot vanishes (one branch per factor that can vanish).  Branch depth
is capped; deeper trees raise CaseSplitRequired.
"""

from __future__ import annotations

from typing import Callable

from .errors import CaseSplitRequired, InfeasibleBranch
from .scalars import (
    AssumptionSet,
    Poly,
    Scalar,
    _nonzero_factors,
    poly_primitive,
)

MAX_SPLIT_DEPTH = 3


class Branch:
    """One leaf of a case tree: extra assumptions plus the value under them."""

    __slots__ = ("assumptions", "value")

    def __init__(self, assumptions: AssumptionSet, value):
        self.assumptions = assumptions
        self.value = value

    def __repr__(self):
        return f"Branch({self.assumptions}, {self.value!r})"


def zero_bindings(p: Poly, assumptions: AssumptionSet):
    """Ways a polynomial can vanish, as (parameter, value) bindings.

    Returns a list with one binding per factor that may vanish.  An empty
    list means the polynomial is actually nonzero once factored.  Factors
    that are neither linear in some parameter with a decided-nonzero leading
    coefficient nor univariate with rational roots raise CaseSplitRequired.
    """
    out = []
    for f in _nonzero_factors(p):
        if f.is_const():
            continue
        if assumptions.decide(f) == "nonzero":
            continue
        binding = _solve_factor(f, assumptions)
        if binding is None:
            raise CaseSplitRequired(f)
        out.append(binding)
    return out


def _solve_factor(f: Poly, assumptions: AssumptionSet):
    for v in sorted(f.symbols()):
        if f.degree_in(v) != 1:
            continue
        lead = Poly({})
        rest = Poly({})
        for m, c in f.t.items():
            d = dict(m)
            e = d.pop(v, 0)
            stripped = tuple(sorted(d.items()))
            if e:
                lead = lead + Poly({stripped: c})
            else:
                rest = rest + Poly({stripped: c})
        if assumptions.decide(lead) == "nonzero":
            value = Scalar(-rest, lead)
            return (v, value)
    return None


def _case_branches(pivot: Scalar, assumptions: AssumptionSet, depth: int):
    """(nonzero-branch assumptions or None, [zero-branch assumption sets])."""
    p = poly_primitive(pivot.num)
    if depth >= MAX_SPLIT_DEPTH:
        raise CaseSplitRequired(p, "case split depth exceeded")
    zero_sets = []
    for param, value in zero_bindings(p, assumptions):
        try:
            zero_sets.append(assumptions.with_binding(param, value))
        except InfeasibleBranch:
            continue
    try:
        nonzero = assumptions.assuming_nonzero(pivot)
    except InfeasibleBranch:
        nonzero = None
    return nonzero, zero_sets


def _subst_matrix(rows, assumptions: AssumptionSet):
    if not assumptions.bindings:
        return [list(r) for r in rows]
    return [[assumptions.apply(e) for e in r] for r in rows]


# ---------------------------------------------------------------------------
# reduced row echelon form (no case splitting; pivots must be decidable)
# ---------------------------------------------------------------------------


def rref(rows, assumptions: AssumptionSet):
    """Canonical reduced row echelon form; zero rows dropped.

    Raises CaseSplitRequired if a needed pivot is not decided nonzero.
    """
    if not rows:
        return []
    m = _subst_matrix(rows, assumptions)
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = None
        undecided = None
        for i in range(r, len(m)):
            e = m[i][col]
            if e.is_zero():
                continue
            if assumptions.decide_scalar(e) == "nonzero":
                piv = i
                break
            if undecided is None:
                undecided = e
        if piv is None and undecided is not None:
            raise CaseSplitRequired(poly_primitive(undecided.num))
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        m[r] = [e * inv for e in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [m[i][j] - f * m[r][j] for j in range(ncols)]
        r += 1
        if r == len(m):
            break
    return [row for row in m if any(not e.is_zero() for e in row)]


def rank(rows, assumptions: AssumptionSet) -> int:
    return len(rref(rows, assumptions))


def span_equal(rows_a, rows_b, assumptions: AssumptionSet) -> bool:
    """Exact subspace equality of the row spans."""
    ra = rref(rows_a, assumptions)
    rb = rref(rows_b, assumptions)
    if len(ra) != len(rb):
        return False
    return all(x == y for row_a, row_b in zip(ra, rb) for x, y in zip(row_a, row_b))


def solve_unique(a_rows, rhs, assumptions: AssumptionSet):
    """Solve A x = rhs when the solution is unique.

    Returns the solution vector, or None when the system is inconsistent.
    Raises CaseSplitRequired for undecidable pivots and InfeasibleBranch is
    never raised here.  An underdetermined consistent system raises
    CaseSplitRequired as well (the callers always expect full column rank).
    """
    ncols = len(a_rows[0]) if a_rows else 0
    aug = [list(row) + [r] for row, r in zip(a_rows, rhs)]
    red = rref(aug, assumptions)
    solution = [Scalar.zero()] * ncols
    pivot_cols = []
    for row in red:
        lead = next((j for j in range(ncols + 1) if not row[j].is_zero()), None)
        if lead is None:
            continue
        if lead == ncols:
            return None  # 0 = 1 row: inconsistent
        pivot_cols.append(lead)
        solution[lead] = row[ncols]
    if len(pivot_cols) < ncols:
        free = [j for j in range(ncols) if j not in pivot_cols]
        raise CaseSplitRequired(Poly.const(0), f"underdetermined system (free columns {free})")
    for row in red:
        lead = next(j for j in range(ncols + 1) if not row[j].is_zero())
        if lead < ncols and any(not row[j].is_zero() for j in range(lead + 1, ncols)):
            # eliminate dependencies: rref already normalized, so other
            # entries in pivot rows refer to free columns; none exist here.
            raise CaseSplitRequired(Poly.const(0), "unexpected dependent columns")
    return solution


# ---------------------------------------------------------------------------
# nullspace with case splitting
# ---------------------------------------------------------------------------


def nullspace_cases(rows, ncols: int, assumptions: AssumptionSet, depth: int = 0):
    """Case tree of nullspace bases for the homogeneous system rows * x = 0.

    Returns a list of Branch objects whose value is the canonical basis
    (RREF-derived, one vector per free column) of the solution space under
    that branch's assumptions.  Branch order: generic (pivot nonzero) first.
    """
    m = _subst_matrix(rows, assumptions)
    try:
        reduced, pivot_cols = _echelon(m, ncols, assumptions)
    except _PivotUndecided as exc:
        nonzero, zero_sets = _case_branches(exc.entry, assumptions, depth)
        branches = []
        if nonzero is not None:
            branches.extend(nullspace_cases(rows, ncols, nonzero, depth + 1))
        for zs in zero_sets:
            branches.extend(nullspace_cases(rows, ncols, zs, depth + 1))
        return branches
    basis = _nullspace_from_rref(reduced, pivot_cols, ncols)
    return [Branch(assumptions, basis)]


class _PivotUndecided(Exception):
    def __init__(self, entry: Scalar):
        self.entry = entry


def _echelon(m, ncols, assumptions):
    """Reduced elimination with decided pivots, deferring undecided columns.

    Pivots are chosen anywhere in the matrix as long as the entry is decided
    nonzero; a case split (via _PivotUndecided) is forced only when nonzero
    entries remain but none is decided.  This keeps parameter-independent
    solution spaces free of spurious branches.
    """
    pivot_of_col: dict[int, int] = {}
    used_rows: set[int] = set()
    while True:
        # Among decided-nonzero entries, prefer pivots from rows with the
        # smallest support: consuming the simplest constraints first avoids
        # leftover rows whose every entry is parameter-laden.
        best = None
        best_key = None
        for i in range(len(m)):
            if i in used_rows:
                continue
            support = [j for j in range(ncols)
                       if j not in pivot_of_col and not m[i][j].is_zero()]
            for j in support:
                if assumptions.decide_scalar(m[i][j]) == "nonzero":
                    key = (len(support), j, i)
                    if best_key is None or key < best_key:
                        best, best_key = (i, j), key
                    break
        if best is None:
            stuck = _stuck_entry(m, used_rows, pivot_of_col, ncols)
            if stuck is not None:
                raise _PivotUndecided(stuck)
            break
        i, col = best
        inv = m[i][col].inverse()
        m[i] = [e * inv for e in m[i]]
        for k in range(len(m)):
            if k != i and not m[k][col].is_zero():
                f = m[k][col]
                m[k] = [m[k][j] - f * m[i][j] for j in range(ncols)]
        pivot_of_col[col] = i
        used_rows.add(i)
    pivot_cols = sorted(pivot_of_col)
    reduced = [m[pivot_of_col[c]] for c in pivot_cols]
    return reduced, pivot_cols


def _stuck_entry(m, used_rows, pivot_of_col, ncols):
    """Choose the entry to case-split on when no decided pivot remains.

    Rows with a single surviving entry are preferred: such a row states
    entry * unknown = 0, so splitting on the entry is the genuine dichotomy
    (generically the unknown dies; on the vanishing locus the constraint
    disappears).  Ties and multi-entry rows fall back to the structurally
    simplest entry.
    """
    candidates = []
    for i in range(len(m)):
        if i in used_rows:
            continue
        support = [j for j in range(ncols) if j not in pivot_of_col and not m[i][j].is_zero()]
        for j in support:
            e = m[i][j]
            key = (
                0 if len(support) == 1 else 1,
                e.num.total_degree(),
                len(e.num.t),
                str(e.num),
            )
            candidates.append((key, e))
    if not candidates:
        return None
    candidates.sort(key=lambda t: t[0])
    return candidates[0][1]


def _nullspace_from_rref(reduced, pivot_cols, ncols):
    free_cols = [j for j in range(ncols) if j not in pivot_cols]
    basis = []
    for fc in free_cols:
        v = [Scalar.zero()] * ncols
        v[fc] = Scalar.one()
        for row, pc in zip(reduced, pivot_cols):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# generic case-split evaluation of a predicate-like computation
# ---------------------------------------------------------------------------


def case_split(fn: Callable[[AssumptionSet], object], assumptions: AssumptionSet, depth: int = 0):
    """Run fn under assumptions, splitting on CaseSplitRequired pivots.

    fn must raise CaseSplitRequired(pivot_poly) when it hits an undecidable
    decision.  Returns a list of Branch objects with fn's result as value.
    """
    try:
        return [Branch(assumptions, fn(assumptions))]
    except CaseSplitRequired as exc:
        pivot = exc.pivot
        if not isinstance(pivot, Poly) or pivot.is_const():
            raise
        nonzero, zero_sets = _case_branches(Scalar(pivot, Poly.const(1)), assumptions, depth)
        branches = []
        if nonzero is not None:
            branches.extend(case_split(fn, nonzero, depth + 1))
        for zs in zero_sets:
            branches.extend(case_split(fn, zs, depth + 1))
        if not branches:
            raise CaseSplitRequired(pivot, "all branches infeasible")
        return branches
