"""twistpoly: exact polynomial invariants of twisted virtual graph diagrams."""

__version__ = "0.1.0"

from .poly import Poly, equal_up_to_unit

__all__ = ["Poly", "equal_up_to_unit", "__version__"]
