"""Exact scalars, polynomials, sparse linear algebra and Artin local algebras."""

from .artin import (ArtinHom, ArtinLocalAlgebra, SmallExtension, artin_quotient, fiber_product,
                    ground_field_algebra, quotient_map, small_extension, truncation)
from .field import GF, QQ, Field, GFElement
from .linalg import EchelonBasis, nullspace, rank, solve
from .poly import LaurentRing, Poly, parse_terms

__all__ = [
    "ArtinHom", "ArtinLocalAlgebra", "EchelonBasis", "Field", "GF", "GFElement", "LaurentRing",
    "Poly", "QQ", "SmallExtension", "artin_quotient", "fiber_product", "ground_field_algebra",
    "nullspace", "parse_terms", "quotient_map", "rank", "small_extension", "solve", "truncation",
]
