"""Exception types raised across the package."""


class MarkoffError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrixError(MarkoffError):
    """Inverse requested for a matrix with zero determinant."""


class NotNilpotentError(MarkoffError):
    """Nilpotent-only operation applied to a matrix with R^3 != 0."""


class RootHasNoParentError(MarkoffError):
    """parent() called on the root triple (3, 3, 3)."""


class InvalidTripleError(MarkoffError):
    """Input does not satisfy the (normalized or classical) Markoff equation."""


class NotUnimodularError(MarkoffError):
    """Integral matrix with determinant not in {1, -1} where unimodularity is required."""


class InconsistentDecompositionError(MarkoffError):
    """A 2x2 component could not be written over the base (A0, A0B0, B0)."""


class DegenerateArrangementError(MarkoffError):
    """Arrangement with a*c - b <= 0 fed to the Jordan-basis construction."""


class MismatchedDominantError(MarkoffError):
    """Pair of arrangements whose a*c - b values differ."""


class ExcludedRootError(MarkoffError):
    """Pair context requested for m in {3, 6}, which the pair machinery excludes."""


class InternalInconsistencyError(MarkoffError):
    """The independently computed forms of N(s) disagree: implementation bug."""


class NotAnIsomorphError(MarkoffError):
    """Matrix outside the one-parameter isomorph family of the context."""


class IntegralParameterNotFoundError(MarkoffError):
    """No integral family member within the numerator scan bound."""


class LemmaViolationError(MarkoffError):
    """A prime-power split that the divisibility lemmas guarantee failed to hold."""


class NonIntegralParameterError(MarkoffError):
    """s-parameter whose scaled numerator is not an integer."""


class ParityError(MarkoffError):
    """Even-m congruence replay requested without the factor-2 adjustment."""
