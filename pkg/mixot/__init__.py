"""Mixture Wasserstein distances, geodesics and barycenters with a grid Sinkhorn reference."""

from .atoms import Atom, build_profile, gaussian_profile, slater_profile, wigner_profile
from .config import Settings, configure_logging, load_settings
from .errors import MixotError
from .grid import GridDensity, GridSpec, rasterize_mixture, sinkhorn_barycenter, sinkhorn_w2_squared
from .mixtures import Mixture, canonicalize, mixture_barycenter_multi, mixture_barycenter_pair, mixture_distance
from .symmetry import SymmetrizedAtom, build_group, symmetrize

__all__ = [
    'Atom',
    'GridDensity',
    'GridSpec',
    'Mixture',
    'MixotError',
    'Settings',
    'SymmetrizedAtom',
    'build_group',
    'build_profile',
    'canonicalize',
    'configure_logging',
    'gaussian_profile',
    'load_settings',
    'mixture_barycenter_multi',
    'mixture_barycenter_pair',
    'mixture_distance',
    'rasterize_mixture',
    'sinkhorn_barycenter',
    'sinkhorn_w2_squared',
    'slater_profile',
    'symmetrize',
    'wigner_profile',
]
