"""klvwb: Kazhdan-Lusztig-Vogan polynomials over combinatorial orbit datums."""

__version__ = "0.1.0"

from .laurent import LaurentPoly, PoincareSeries, kernel_backend

__all__ = ["LaurentPoly", "PoincareSeries", "kernel_backend", "__version__"]
