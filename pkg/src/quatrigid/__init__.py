"""Quaternionic matrix algebra, branching rules and Weitzenbock-type certificates
for the chain su(n,1) < u(n,1) < sp(n,1) < u(2n,2) < so(4n,4)."""

from .liecore import AlgebraTag, Kind, LieElement
from .quatmat import Convention, Field, Quaternion, StructuredMatrix

__version__ = "0.1.0"

__all__ = [
    "AlgebraTag",
    "Convention",
    "Field",
    "Kind",
    "LieElement",
    "Quaternion",
    "StructuredMatrix",
    "__version__",
]
