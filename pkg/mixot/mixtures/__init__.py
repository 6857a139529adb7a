"""Mixtures of atoms and the mixture Wasserstein geometry."""

from .canonical import canonicalize, is_canonical
from .metric import (
    atom_distance_matrix,
    mixture_barycenter_multi,
    mixture_barycenter_pair,
    mixture_density,
    mixture_distance,
    mixture_path_length,
    mixture_pdf,
)
from .models import Mixture, MixtureAtom, family_of

__all__ = [
    'Mixture',
    'MixtureAtom',
    'atom_distance_matrix',
    'canonicalize',
    'family_of',
    'is_canonical',
    'mixture_barycenter_multi',
    'mixture_barycenter_pair',
    'mixture_density',
    'mixture_distance',
    'mixture_path_length',
    'mixture_pdf',
]
