"""Torus-symmetry posets of c-symplectic Sullivan models."""

from .algebra import (
    Generator,
    Poly,
    RelativeModel,
    SullivanModel,
    UsageError,
    parse_model,
    validate_model,
)
from .cohomology import (
    BettiTable,
    CsCertificate,
    betti_numbers,
    c_symplectic_certify,
    formal_dimension,
    unipotent_parameter_count,
)
from .lattice import (
    ConstraintLattice,
    FieldSpec,
    UnsupportedConfiguration,
    extract_constraint_lattice,
    points_structure,
    subgroup_equals,
    subgroup_includes,
)

__version__ = "0.1.0"
