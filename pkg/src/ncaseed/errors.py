"""Exception taxonomy shared by all ncaseed modules."""


class NcaseedError(Exception):
    """Base class for all library errors."""


# -- scalars ---------------------------------------------------------------

class UnboundParameter(NcaseedError):
    pass


class DenominatorVanishes(NcaseedError):
    pass


class AssumptionViolated(NcaseedError):
    pass


class ZeroRadicand(NcaseedError):
    pass


class ZeroDivisionScalar(NcaseedError):
    pass


class SqrtTowerTooDeep(NcaseedError):
    pass


class ReservedSymbol(NcaseedError):
    pass


# -- freealg ----------------------------------------------------------------

class DegreeTooSmall(NcaseedError):
    pass


class ArityMismatch(NcaseedError):
    pass


class ZeroVector(NcaseedError):
    pass


class WrongDegree(NcaseedError):
    pass


class ZeroInput(NcaseedError):
    pass


class SingularMatrix(NcaseedError):
    pass


# -- exprparse ---------------------------------------------------------------

class ExprSyntaxError(NcaseedError):
    """Raised on malformed input; carries the 0-based offset of the bad token."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MixedDegree(NcaseedError):
    pass


class UnknownSymbol(NcaseedError):
    pass


class NonScalarEntry(NcaseedError):
    pass


# -- case splitting / solvers -------------------------------------------------

class CaseSplitRequired(NcaseedError):
    """A symbolic decision depends on parameter values the caller must fix.

    ``pivot`` is the offending polynomial (a Poly), printable via str().
    """

    def __init__(self, pivot, message="case split required"):
        super().__init__(f"{message}: {pivot}")
        self.pivot = pivot


class InfeasibleBranch(NcaseedError):
    """Internal: a case branch contradicts the active assumptions."""


# -- superpot ----------------------------------------------------------------

class NotTwistedSuperpotential(NcaseedError):
    pass


class NotStandard(NcaseedError):
    pass


class NoSolution(NcaseedError):
    pass


class DependentRelations(NcaseedError):
    pass


class NoPotential(NcaseedError):
    pass


# -- geometry ------------------------------------------------------------------

class PointNotOnComponent(NcaseedError):
    pass


class UnknownType(NcaseedError):
    pass


class InvalidPair(NcaseedError):
    pass


# -- classify -------------------------------------------------------------------

class TypeMismatch(NcaseedError):
    pass


class InvalidSequence(NcaseedError):
    pass
