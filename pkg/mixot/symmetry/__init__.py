"""Group-invariant measures: symmetrized atoms, quotient metric, Slater determinants."""

from .groups import (
    GroupElement,
    GroupKind,
    SymmetryGroup,
    build_group,
    parity_group,
    permutation_group,
    rotation_matrix,
    so2_group,
)
from .slater import (
    SlaterDeterminantAtom,
    SlaterMixture,
    overlap_matrix,
    sd_from_symmetrized,
    sd_mixture_barycenter_pair,
    sd_mixture_distance,
    sd_normalization,
    sd_to_symmetrized,
    slater_det_density,
)
from .symmetrized import (
    SymmetrizedAtom,
    canonical_representative,
    group_orbit,
    so2_align,
    sym_barycenter,
    sym_distance,
    sym_multimarginal,
    sym_pdf,
    symmetrize,
)

__all__ = [
    'GroupElement',
    'GroupKind',
    'SlaterDeterminantAtom',
    'SlaterMixture',
    'SymmetrizedAtom',
    'SymmetryGroup',
    'build_group',
    'canonical_representative',
    'group_orbit',
    'overlap_matrix',
    'parity_group',
    'permutation_group',
    'rotation_matrix',
    'sd_from_symmetrized',
    'sd_mixture_barycenter_pair',
    'sd_mixture_distance',
    'sd_normalization',
    'sd_to_symmetrized',
    'slater_det_density',
    'so2_align',
    'so2_group',
    'sym_barycenter',
    'sym_distance',
    'sym_multimarginal',
    'sym_pdf',
    'symmetrize',
]
