"""Exact torsion-slope algebra on elliptic curves.

The library computes, with exact arithmetic, the slope-type invariants
attached to torsion divisors of a short-Weierstrass curve, verifies the
network of algebraic identities they satisfy (including the Weil-pairing
duality and composite-torsion trace relations), and assembles quadric
projective models of the level-l modular curve from the torsion of a
single curve.  A floating-point module cross-checks the analytic origin
of the invariants via lattice sums.
"""

__version__ = "0.1.0"

from .errors import ModuliEisError
from .field import (
    FieldDescriptor,
    FieldElement,
    Matrix,
    field_arith,
    kernel_basis,
    primitive_root_of_unity,
)
from .curve import (
    CurvePoint,
    TorsionTable,
    WeierstrassCurve,
    division_polynomial_sq,
    enumerate_fiber_bases,
    find_full_torsion_curve,
    point_op,
    scale_curve,
    scale_table,
    torsion_table,
)
from .series import (
    BalancedSeries,
    LambdaProfile,
    TorsionDivisor,
    compose_with_n,
    expand_fD,
    expand_xy,
    lambda_profile,
    line_series,
    vertical_series,
)
from .pairing import PairingValue, verify_translation_law, weil_pairing

__all__ = [
    "ModuliEisError",
    "FieldDescriptor",
    "FieldElement",
    "Matrix",
    "field_arith",
    "kernel_basis",
    "primitive_root_of_unity",
    "CurvePoint",
    "TorsionTable",
    "WeierstrassCurve",
    "division_polynomial_sq",
    "enumerate_fiber_bases",
    "find_full_torsion_curve",
    "point_op",
    "scale_curve",
    "scale_table",
    "torsion_table",
    "BalancedSeries",
    "LambdaProfile",
    "TorsionDivisor",
    "compose_with_n",
    "expand_fD",
    "expand_xy",
    "lambda_profile",
    "line_series",
    "vertical_series",
    "PairingValue",
    "verify_translation_law",
    "weil_pairing",
]
