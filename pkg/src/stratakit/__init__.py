"""Orbit-type stratifications of the zero-momentum reduced space.

For a compact group that is a finite part times a torus, acting
orthogonally on R^n, this package computes the isotropy lattice of the
base action, decomposes the zero level of the lifted momentum map on
T*R^n into pieces indexed by pairs of isotropy classes, and organizes
the pieces into the symplectic, secondary, and coisotropic lattices of
the reduced space, with exact dimension and rank bookkeeping plus a
sampling harness that cross-checks the combinatorics numerically.

The usual entry points:

    spec = stratakit.load_spec_file("action.json")
    lat = stratakit.build_lattice(spec)
    sym, secondary, coiso = stratakit.all_lattices(lat)

The ``stratakit`` console script wraps the same steps as the
``lattice``, ``reduce``, ``verify``, and ``export-dot`` subcommands.
"""

from .errors import (
    ClassNotFound,
    CoisotropyIdentityViolation,
    DimensionMismatch,
    InternalCheckError,
    NonProductStabilizer,
    NotExampleSpec,
    NotOnZeroLevel,
    NumericalAmbiguity,
    ParseError,
    StratakitError,
    VerificationFailure,
)
from .groups import ActionSpec, GroupElement, act, cotangent_act, load_spec, load_spec_file
from .harness import (
    check_relations,
    classify_image,
    invariant_set,
    local_dimension,
    sample_zero_level,
    verify_piece_regions,
)
from .lattice import IsotropyLattice, build_lattice, enumerate_orbit_types
from .momentum import fiber_decomposition, sample_fiber_classes
from .strata import (
    Piece,
    StratLattice,
    all_lattices,
    coisotropic_lattice,
    connectable_pairs,
    piece_dimensions,
    refinement_check,
    secondary_lattice,
    symplectic_lattice,
)

__version__ = "0.1.0"

__all__ = [
    "ActionSpec",
    "ClassNotFound",
    "CoisotropyIdentityViolation",
    "DimensionMismatch",
    "GroupElement",
    "InternalCheckError",
    "IsotropyLattice",
    "NonProductStabilizer",
    "NotExampleSpec",
    "NotOnZeroLevel",
    "NumericalAmbiguity",
    "ParseError",
    "Piece",
    "StratLattice",
    "StratakitError",
    "VerificationFailure",
    "act",
    "all_lattices",
    "build_lattice",
    "check_relations",
    "classify_image",
    "coisotropic_lattice",
    "connectable_pairs",
    "cotangent_act",
    "enumerate_orbit_types",
    "fiber_decomposition",
    "invariant_set",
    "load_spec",
    "load_spec_file",
    "local_dimension",
    "piece_dimensions",
    "refinement_check",
    "sample_fiber_classes",
    "sample_zero_level",
    "secondary_lattice",
    "symplectic_lattice",
    "verify_piece_regions",
    "__version__",
]
