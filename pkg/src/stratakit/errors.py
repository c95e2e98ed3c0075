"""Exception hierarchy and the exit codes the CLI maps them to."""


class StratakitError(Exception):
    """Base class for all stratakit errors."""

    exit_code = 1


class ParseError(StratakitError):
    """Malformed or invalid action-spec document."""

    exit_code = 1


class NonOrthogonalGenerator(ParseError):
    """A finite generator fails G^T G = I in exact arithmetic."""


class InfiniteFiniteGroup(ParseError):
    """Closure of the finite generators exceeded the configured cap."""


class IncompatibleBlocks(ParseError):
    """A finite generator does not commute with the torus rotations."""


class DimensionMismatch(StratakitError):
    """Vector length does not match the ambient dimension."""


class NonProductStabilizer(StratakitError):
    """A stabilizer is a twisted subgroup of F x T^k, not a product.

    Reported rather than silently approximated; the subgroup calculus in
    this package only covers product-form subgroups.
    """

    exit_code = 2


class NumericalAmbiguity(StratakitError):
    """A floating-point block equation sits between two solution types."""

    exit_code = 3


class InternalCheckError(StratakitError):
    """An internal consistency assertion failed (likely a bug upstream)."""

    exit_code = 3


class NoUniqueMinimum(InternalCheckError):
    """The isotropy poset has no unique minimal class."""


class WitnessSearchFailed(InternalCheckError):
    """Witness retries exhausted for a candidate judged realizable."""


class ClassNotFound(StratakitError):
    """A class id was requested that is not in the isotropy lattice."""


class CoisotropyIdentityViolation(StratakitError):
    """Piece dimensions violate rank = 2 dim_W - dim_V or a sanity bound."""

    exit_code = 4


class VerificationFailure(StratakitError):
    """A verification check failed; the message names the check."""

    exit_code = 5


class NotOnZeroLevel(StratakitError):
    """Point handed to the region classifier has nonzero momentum."""


class NotExampleSpec(StratakitError):
    """Region classification requested for a spec without a region model."""
