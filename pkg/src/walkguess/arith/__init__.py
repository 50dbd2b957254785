from .poly import ArityError, CatalyticPoly, UniPoly, poly_arith
from .series import TruncatedSeries, TruncationError, coeff_slice, series_mul, substitute
from .linalg import ExactMatrix, canonical_vector, nullspace

__all__ = [
    "ArityError", "CatalyticPoly", "UniPoly", "poly_arith",
    "TruncatedSeries", "TruncationError", "coeff_slice", "series_mul", "substitute",
    "ExactMatrix", "canonical_vector", "nullspace",
]
