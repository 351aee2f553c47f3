"""Exception types raised by the solver pipeline."""


class IgaCufError(Exception):
    """Base class for all package errors."""


class DomainError(IgaCufError, ValueError):
    """A parameter or physical point lies outside the admissible domain."""


class RefinementError(IgaCufError, ValueError):
    """Knot insertion or degree elevation would produce an invalid basis."""


class MaterialError(IgaCufError, ValueError):
    """Elastic constants do not define a positive definite stiffness."""


class MeshError(IgaCufError, RuntimeError):
    """Degenerate geometry encountered during assembly."""


class SingularSystemError(IgaCufError, RuntimeError):
    """The constrained system matrix could not be factorized."""


class CaseError(IgaCufError, ValueError):
    """A benchmark case description is incomplete or inconsistent."""
