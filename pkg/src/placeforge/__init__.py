"""placeforge: exact places of rational function fields.

Evaluate monomial and composite places (values, residues, invariants) over
Q or GF(p), and construct places of prescribed good classes (discrete,
prime divisor, maximal rank, zero-dimensional towers) inside prescribed
patch neighborhoods, preserving requested residues and values.
"""

from ._kernels import backend as kernel_backend
from .approx import (
    GoodifyResult,
    InfeasibleShapeError,
    SignSignature,
    TargetShape,
    density_witness,
    goodify,
    perturb_weights,
    signature,
)
from .ordgroup import (
    AmbientGroup,
    GroupElem,
    QuadScalar,
    Rat,
    Subgroup,
    cmp_elem,
    convex_rank,
    in_p_divisible_hull,
    order_embedding_check,
    quad_sign,
    rational_rank,
    subgroup_member,
)
from .parsing import ParseError, format_ratfunc, parse_expr
from .places import (
    INFINITY,
    CompositePlace,
    MonomialPlace,
    Place,
    PlaceInvariants,
    ResidueFieldDesc,
    check_spv_axioms,
    compose,
    in_basic_open,
    kernel_lattice,
    monomial_section,
    place_from_json,
)
from .ratfunc import BaseField, Poly, RatFunc, arith, eq_zero

__version__ = "0.1.0"

__all__ = [
    "AmbientGroup",
    "BaseField",
    "CompositePlace",
    "GoodifyResult",
    "GroupElem",
    "INFINITY",
    "InfeasibleShapeError",
    "MonomialPlace",
    "ParseError",
    "Place",
    "PlaceInvariants",
    "Poly",
    "QuadScalar",
    "Rat",
    "RatFunc",
    "ResidueFieldDesc",
    "SignSignature",
    "Subgroup",
    "TargetShape",
    "arith",
    "check_spv_axioms",
    "cmp_elem",
    "compose",
    "convex_rank",
    "density_witness",
    "eq_zero",
    "format_ratfunc",
    "goodify",
    "in_basic_open",
    "in_p_divisible_hull",
    "kernel_backend",
    "kernel_lattice",
    "monomial_section",
    "order_embedding_check",
    "parse_expr",
    "perturb_weights",
    "place_from_json",
    "quad_sign",
    "rational_rank",
    "signature",
    "subgroup_member",
]
