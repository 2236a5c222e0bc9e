"""Exception hierarchy shared by every module of the package."""


class JTError(Exception):
    """Base class for all errors raised by jtsankov."""


class SymmetryError(JTError):
    """An input that must be symmetric (Gram matrix, psi grid) is not."""


class DegenerateFormError(JTError):
    """A bilinear form that must be non-degenerate has a nontrivial radical."""


class DependentVectorsError(JTError):
    """Vectors that were required to be linearly independent are not."""


class CurvatureSymmetryError(JTError):
    """Components do not satisfy the algebraic curvature tensor identities.

    ``report`` carries the :class:`~jtsankov.curvature.SymmetryReport`
    describing the first violated identity.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OrbitConflictError(CurvatureSymmetryError):
    """Two listed components force inconsistent values on one symmetry orbit."""


class NotSkewError(JTError):
    """An endomorphism is not skew-adjoint with respect to the inner product."""


class NotSelfAdjointError(JTError):
    """An endomorphism is not self-adjoint with respect to the inner product."""


class PreconditionError(JTError):
    """An operation was called on an input outside its domain.

    ``witness`` optionally holds the verdict that shows why.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalConsistencyError(JTError):
    """A proven mathematical identity failed; indicates a bug, not a fact."""


class SearchExhaustedError(JTError):
    """A bounded witness search finished without finding a witness."""


class FormatError(JTError, ValueError):
    """A tensor or metric file could not be parsed."""
