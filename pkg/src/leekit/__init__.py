"""Linear diameter-perfect Lee codes DPL(n,6)."""

__version__ = "0.1.0"

from .abelian import AbelianGroup, GroupElement, abelian_groups_of_order, make_group
from .groupring import GroupRingElement, gr_from_set, gr_mul
from .lee import double_lee_sphere, lee_distance, lee_sphere
from .obstruct import ObstructionCertificate, quadratic_sum_obstruction, verify_certificate
from .search import SearchOptions, SearchTask, search_witness
from .tiling import GroupHomomorphism, bijection_check, kernel_basis, packing_crosscheck
from .witness import Witness, construct_dpl3, construct_dpl11, lift_to_code, verify_witness

__all__ = [
    "AbelianGroup",
    "GroupElement",
    "GroupHomomorphism",
    "GroupRingElement",
    "ObstructionCertificate",
    "SearchOptions",
    "SearchTask",
    "Witness",
    "abelian_groups_of_order",
    "bijection_check",
    "construct_dpl11",
    "construct_dpl3",
    "double_lee_sphere",
    "gr_from_set",
    "gr_mul",
    "kernel_basis",
    "lee_distance",
    "lee_sphere",
    "lift_to_code",
    "make_group",
    "packing_crosscheck",
    "quadratic_sum_obstruction",
    "search_witness",
    "verify_certificate",
    "verify_witness",
]
