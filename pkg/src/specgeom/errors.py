"""Exception and warning types shared across the package."""


class SpecGeomError(Exception):
    """Base class for all package errors."""


class DomainError(SpecGeomError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PrecisionError(SpecGeomError, ArithmeticError):
    """The requested accuracy cannot be met in the requested regime."""


class ConvergenceError(SpecGeomError, RuntimeError):
    """An iterative procedure exhausted its iteration budget."""


class ResourceError(SpecGeomError, RuntimeError):
    """A configured size or work budget would be exceeded."""


class MeshError(SpecGeomError, ValueError):
    """Mesh generation produced a degenerate or invalid triangulation."""


class SingularityError(SpecGeomError, ArithmeticError):
    """A sparse factorization failed."""


class ConvergenceWarning(UserWarning):
    """Non-fatal warning emitted when an optimizer stalls."""
