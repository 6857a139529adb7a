"""Densities, distances, geodesics and barycenters of atoms."""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..errors import FamilyMismatchError, InvalidInputError, UnsupportedError
from ..spd import affine_ot_map, barycenter_covariance, check_simplex, gaussian_w2_squared, sqrt_spd
from .models import Atom
from .profiles import GeneratorKind, GeneratorProfile, standard_gamma_pdf

logger = logging.getLogger(__name__)


def ensure_same_family(atoms: Sequence[Atom]) -> GeneratorProfile:
    if not atoms:
        raise InvalidInputError('empty_input', 'at least one atom is required')
    generator = atoms[0].generator
    for atom in atoms[1:]:
        if atom.generator != generator:
            raise FamilyMismatchError(
                'family_mismatch',
                f'atoms belong to different families: {generator.to_dict()} vs {atom.generator.to_dict()}',
            )
    return generator


def _as_points(atom: Atom, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if atom.dim == 1 else pts.reshape(1, -1)
    if pts.ndim != 2 or pts.shape[1] != atom.dim:
        raise InvalidInputError('dimension_mismatch', f'points of shape {np.shape(points)} for a {atom.dim}-dimensional atom')
    return pts


def atom_pdf(atom: Atom, points) -> np.ndarray:
    """Vectorized density; ``points`` has shape ``(N, d)`` (or ``(N,)`` in 1D)."""
    pts = _as_points(atom, points)
    generator = atom.generator
    if generator.kind is GeneratorKind.GAMMA1D:
        std = math.sqrt(float(atom.scatter[0, 0]))
        return standard_gamma_pdf(generator, (pts[:, 0] - atom.mean[0]) / std) / std

    centered = pts - atom.mean
    factor = linalg.cho_factor(atom.scatter, lower=True)
    solved = linalg.cho_solve(factor, centered.T)
    radii = np.einsum('ij,ji->i', centered, solved)
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    norm = generator.unit_normalization() * math.exp(0.5 * log_det)
    return generator.h(np.clip(radii, 0.0, None)) / norm


def atom_density(atom: Atom, x) -> float:
    """Density of ``atom`` at a single point ``x`` of length d."""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.ndim != 1 or point.shape[0] != atom.dim:
        raise InvalidInputError('dimension_mismatch', f'point of length {point.size} for a {atom.dim}-dimensional atom')
    return float(atom_pdf(atom, point.reshape(1, -1))[0])


def atom_w2(a0: Atom, a1: Atom) -> float:
    """W2 distance inside one location-scatter family (depends on the moments only)."""
    ensure_same_family([a0, a1])
    return math.sqrt(gaussian_w2_squared(a0.mean, a0.scatter, a1.mean, a1.scatter))


def atom_w2_squared(a0: Atom, a1: Atom) -> float:
    ensure_same_family([a0, a1])
    return gaussian_w2_squared(a0.mean, a0.scatter, a1.mean, a1.scatter)


def atom_transport_map(a0: Atom, a1: Atom) -> Tuple[np.ndarray, np.ndarray]:
    """Affine optimal map ``x -> A x + b`` pushing ``a0`` onto ``a1``."""
    ensure_same_family([a0, a1])
    return affine_ot_map(a0.mean, a0.scatter, a1.mean, a1.scatter)


def atom_barycenter(weights, atoms: Sequence[Atom]) -> Atom:
    """W2 barycenter: weighted mean of the means, fixed-point scatter."""
    weights = check_simplex(weights)
    if len(atoms) != weights.shape[0]:
        raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(atoms)} atoms')
    generator = ensure_same_family(atoms)
    active = np.flatnonzero(weights)
    if active.shape[0] == 1:
        return atoms[int(active[0])]
    mean = np.zeros(generator.dim)
    for weight, atom in zip(weights, atoms):
        mean = mean + weight * atom.mean
    scatter = barycenter_covariance(weights, [atom.scatter for atom in atoms])
    return Atom(generator, mean, scatter)


def atom_geodesic(a0: Atom, a1: Atom, t: float) -> Atom:
    """Point at time ``t`` on the McCann interpolation from ``a0`` to ``a1``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidInputError('invalid_time', f't must lie in [0, 1], got {t}')
    ensure_same_family([a0, a1])
    if t == 0.0:
        return a0
    if t == 1.0:
        return a1
    return atom_barycenter((1.0 - t, t), (a0, a1))


def _unit_directions(rng: np.random.Generator, size: int, dim: int) -> np.ndarray:
    raw = rng.standard_normal((size, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def sample_standard(generator: GeneratorProfile, size: int, rng: np.random.Generator) -> np.ndarray:
    """Samples of the standardized generator (mean 0, covariance identity)."""
    d = generator.dim
    if generator.kind is GeneratorKind.GAUSSIAN:
        return rng.standard_normal((size, d))
    if generator.kind is GeneratorKind.SLATER:
        radius = rng.gamma(shape=d, scale=1.0 / generator.param('alpha'), size=size)
        return radius[:, None] * _unit_directions(rng, size, d)
    if generator.kind is GeneratorKind.WIGNER:
        radius = np.sqrt(rng.beta(d / 2.0, 1.5, size=size) / generator.param('alpha'))
        return radius[:, None] * _unit_directions(rng, size, d)
    if generator.kind is GeneratorKind.GAMMA1D:
        alpha = generator.param('alpha')
        beta = generator.param('beta')
        raw = rng.gamma(shape=alpha, scale=1.0 / beta, size=size)
        return ((raw - alpha / beta) * beta / math.sqrt(alpha)).reshape(-1, 1)
    raise UnsupportedError('unsupported_profile', 'sampling is not available for custom profiles')


def sample_atom(atom: Atom, size: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Draw ``size`` exact samples of ``atom`` as an ``(size, d)`` array."""
    rng = rng if rng is not None else np.random.default_rng()
    standard = sample_standard(atom.generator, int(size), rng)
    return atom.mean + standard @ sqrt_spd(atom.scatter)


__all__ = [
    'atom_barycenter',
    'atom_density',
    'atom_geodesic',
    'atom_pdf',
    'atom_transport_map',
    'atom_w2',
    'atom_w2_squared',
    'ensure_same_family',
    'sample_atom',
    'sample_standard',
]
