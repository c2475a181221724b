"""Pascal-type triangles, their time-reversed growth chains and limit field lines."""
from .triangles import DomainError, TriangleKind, UnreachableStateError

__version__ = "0.1.0"

__all__ = ["DomainError", "TriangleKind", "UnreachableStateError", "__version__"]
