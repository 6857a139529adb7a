"""Location-scatter atom families."""

from .models import Atom
from .operations import (
    atom_barycenter,
    atom_density,
    atom_geodesic,
    atom_pdf,
    atom_transport_map,
    atom_w2,
    atom_w2_squared,
    ensure_same_family,
    sample_atom,
)
from .profiles import (
    GeneratorKind,
    GeneratorProfile,
    build_profile,
    check_h_condition,
    elliptical_profile,
    gamma_profile,
    gaussian_profile,
    slater_profile,
    tail_radius,
    wigner_profile,
)

__all__ = [
    'Atom',
    'GeneratorKind',
    'GeneratorProfile',
    'atom_barycenter',
    'atom_density',
    'atom_geodesic',
    'atom_pdf',
    'atom_transport_map',
    'atom_w2',
    'atom_w2_squared',
    'build_profile',
    'check_h_condition',
    'elliptical_profile',
    'ensure_same_family',
    'gamma_profile',
    'gaussian_profile',
    'sample_atom',
    'slater_profile',
    'tail_radius',
    'wigner_profile',
]
