"""Noncommutative deformations of covered varieties, computed exactly."""

from .algebra import (ArtinHom, ArtinLocalAlgebra, GF, QQ, SmallExtension, fiber_product, ground_field_algebra,
                      small_extension, truncation)
from .cech import CechClass, OrderedCochain, cech_d, extend_Sn, is_coboundary, sheaf_cohomology
from .deform import (Equivalence, NCDeformation, apply_equivalence, equivalent, extend, glue, hull,
                     lift_candidate, moyal, obstructions)
from .geometry import Cover, PolyVectorSection, affine, builtin_variety, product_cover, proj
from .hochschild import PolyDiffCochain, coboundary, hkr_class, lift_polyvector, solve_coboundary

__version__ = "0.1.0"

__all__ = [
    "ArtinHom", "ArtinLocalAlgebra", "CechClass", "Cover", "Equivalence", "GF", "NCDeformation",
    "OrderedCochain", "PolyDiffCochain", "PolyVectorSection", "QQ", "SmallExtension", "affine",
    "apply_equivalence", "builtin_variety", "cech_d", "coboundary", "equivalent", "extend", "extend_Sn",
    "fiber_product", "glue", "ground_field_algebra", "hkr_class", "hull", "is_coboundary", "lift_candidate",
    "lift_polyvector", "moyal", "obstructions", "product_cover", "proj", "sheaf_cohomology",
    "small_extension", "solve_coboundary", "truncation",
]
