"""Exception hierarchy.

``ValidationError`` marks violated preconditions (bad arguments, malformed
inputs); ``NumericalError`` marks data-dependent numerical failures.  The CLI
maps any ``GraphSampError`` to exit code 2 and reserves exit code 1 for
command-line usage errors.
"""


class GraphSampError(Exception):
    """Base class for all library errors."""


class ValidationError(GraphSampError, ValueError):
    """A precondition on the inputs was violated."""


class NumericalError(GraphSampError, ArithmeticError):
    """A numerical operation failed on otherwise well-formed inputs."""


# -- core -----------------------------------------------------------------

class NegativeWeightError(ValidationError):
    """Adjacency contains a negative edge weight."""


class NonzeroDiagonalError(ValidationError):
    """Adjacency has a nonzero diagonal entry (self loop)."""


class NonPositiveImportanceError(ValidationError):
    """A vertex importance value is not strictly positive."""


class IndexOutOfRangeError(ValidationError):
    """A vertex index falls outside [0, N)."""


class NotPSDError(NumericalError):
    """Matrix is not positive semi-definite within tolerance."""


# -- synthdata ------------------------------------------------------------

class BadSizeError(ValidationError):
    """Requested problem size is too small."""


class DegenerateRangeError(ValidationError):
    """Correlation range parameter must be positive."""


class EmptyBatchError(ValidationError):
    """Signal batch contains no realizations."""


# -- graphlearn -----------------------------------------------------------

class SingularShiftedLError(NumericalError):
    """L + (1/N) 11^T is singular, so the learning objective is undefined."""


class NotPDError(NumericalError):
    """Matrix is not positive definite."""


class NoProgressError(NumericalError):
    """First optimization sweep increased the objective (implementation bug)."""


# -- sampler --------------------------------------------------------------

class SingularOperatorError(NumericalError):
    """The scaled graph operator is singular and the shift fallback is off."""


class AlreadySelectedError(ValidationError):
    """Vertex is already a member of the sampling set."""


class MissingImportanceError(ValidationError):
    """Graph model carries no vertex importance vector."""


class BadBudgetError(ValidationError):
    """Sampling budget k is outside [1, N]."""


class BadProbabilityError(ValidationError):
    """Inclusion probability must lie in (0, 1]."""


class IsolatedVertexError(ValidationError):
    """Graph has an isolated vertex and the strict policy is in force."""


# -- reconstruct ----------------------------------------------------------

class SolveFailureError(NumericalError):
    """Positive-definite factorization or solve failed."""


# -- bench ----------------------------------------------------------------

class ShapeMismatchError(ValidationError):
    """Paired vector lists disagree in count or length."""
