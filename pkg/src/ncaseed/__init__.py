"""ncaseed: exact classification toolkit for cubic regular algebras on two
generators whose point schemes are unions of lines and Mobius graphs."""

from . import errors
from .scalars import (
    Assumption,
    AssumptionSet,
    Scalar,
    adjoin_sqrt,
    declare_parameter,
    substitute,
)
from .freealg import (
    LinearMap2,
    NCPoly,
    evaluate_multilinear,
    left_derivative,
    right_derivative,
    rotate,
    slot_map,
)
from .exprparse import parse_matrix, parse_ncpoly, parse_point, parse_scalar
from .superpot import (
    aut_membership,
    derivation_quotient,
    is_standard,
    is_superpotential,
    m_matrix,
    ms_twist,
    potential_from_relations,
    recover_Q,
    twisting_matrix,
)
from .segre import (
    BiForm,
    common_zero_empty,
    common_zero_empty_cases,
    det_segre,
    is_as_regular,
    to_biform,
    vanishes_on_component,
)
from .geometry import (
    GeometricPair,
    Graph,
    HLine,
    Mobius,
    ProjPoint,
    SigmaDatum,
    VLine,
    apply_sigma,
    catalog_E,
    catalog_sigma,
    gamma_parametrization,
    is_G_automorphism,
    parse_pair_spec,
    transport,
)
from .g2solver import RelationBasis, check_g2_membership, relations_from_pair
from .classify import (
    AlgebraInstance,
    MobiusSequence,
    VerificationReport,
    iso_condition,
    morita_condition,
    reproduce_table,
    stabilizer_family,
    verify_morita_sequence,
    wl_catalog,
)

__version__ = "0.1.0"
