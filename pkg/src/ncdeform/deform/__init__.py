"""Deformations over Artin bases: lifting, obstructions, equivalence, gluing, hulls."""

from .deformation import NCDeformation, commutative_product, describe, moyal, twist_defect
from .equivalence import (Equivalence, apply_equivalence, are_equivalent, compose_equivalences, equivalent,
                          inverse_equivalence)
from .gluing import check_commutes, functoriality_check, glue, j_matrix, pushforward
from .hull import HullResult, TangentVector, hull, obstruction_dims, tangent_basis
from .lift import (CandidateLift, ChoiceData, all_defects, check_identities, defect_f, defect_g, defect_h,
                   defect_sigma, lift_candidate, random_choice, random_cochain, transform, updated_f, updated_g,
                   updated_h)
from .obstruction import JClass, ObstructionReport, T1Choice, extend, extend_with_report, obstructions
from .rcochain import RCochain
from .twist import change_twist, check_twist, twist_coboundary, twist_cochain_d

__all__ = [
    "CandidateLift", "ChoiceData", "Equivalence", "HullResult", "JClass", "NCDeformation", "ObstructionReport",
    "RCochain", "T1Choice", "TangentVector", "all_defects", "apply_equivalence", "are_equivalent",
    "change_twist", "check_commutes", "check_identities", "check_twist", "commutative_product",
    "compose_equivalences", "defect_f", "defect_g", "defect_h", "defect_sigma", "describe", "equivalent",
    "extend", "extend_with_report", "functoriality_check", "glue", "hull", "inverse_equivalence", "j_matrix",
    "lift_candidate", "moyal", "obstruction_dims", "obstructions", "pushforward", "random_choice",
    "random_cochain", "tangent_basis", "transform", "twist_coboundary", "twist_cochain_d", "twist_defect",
    "updated_f", "updated_g", "updated_h",
]
