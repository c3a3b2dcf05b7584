"""Finite computer algebra for commutative ternary Gamma-semirings."""

__version__ = "0.1.0"

from .errors import (
    DegenerateSystemError,
    InputError,
    PreconditionError,
    ResourceError,
    StructuralError,
)
from .structures import (
    AxiomReport,
    FormulaFamily,
    GammaSemiring,
    build_z6_z4modes,
    check_axioms,
    check_axioms_sampled,
    evaluate_tern,
    generate_standard_family,
)

__all__ = [
    "AxiomReport",
    "DegenerateSystemError",
    "FormulaFamily",
    "GammaSemiring",
    "InputError",
    "PreconditionError",
    "ResourceError",
    "StructuralError",
    "build_z6_z4modes",
    "check_axioms",
    "check_axioms_sampled",
    "evaluate_tern",
    "generate_standard_family",
]
