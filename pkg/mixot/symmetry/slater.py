"""Squared Slater determinants of Gaussian orbitals and their symmetrized-Gaussian image.

The map sending the orbital set ``(m_i, S_i)`` to the permutation-symmetrized
Gaussian with mean ``(m_1, ..., m_n)`` and block-diagonal scatter is a
bijection, so distances and barycenters are computed on the image.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate, linalg, stats

from ..atoms import Atom, gaussian_profile
from ..constants import ATOM_MERGE_ATOL, SD_QUAD_EPSREL
from ..errors import DegenerateDeterminantError, InvalidInputError, UnsupportedError
from ..spd import as_vector, check_spd
from .groups import GroupKind, permutation_group
from .symmetrized import SymmetrizedAtom

logger = logging.getLogger(__name__)

QUADRATURE_MAX_COORDS = 3
QUADRATURE_SIGMAS = 10.0
BLOCK_DIAGONAL_RTOL = 1e-9


def _orbitals(means, scatters) -> Tuple[np.ndarray, np.ndarray]:
    means = np.asarray(means, dtype=float)
    if means.ndim == 1:
        means = means.reshape(-1, 1)
    if means.ndim != 2 or means.shape[0] < 1:
        raise InvalidInputError('invalid_shape', f'orbital means must have shape (n, d), got {means.shape}')
    n, d = means.shape
    raw = np.asarray(scatters, dtype=float)
    if raw.ndim == 1 and d == 1:
        raw = raw.reshape(-1, 1, 1)
    if raw.shape != (n, d, d):
        raise InvalidInputError('invalid_shape', f'orbital scatters must have shape ({n}, {d}, {d}), got {raw.shape}')
    for i in range(n):
        as_vector(means[i], f'means[{i}]')
    mats = np.stack([check_spd(raw[i], name=f'scatters[{i}]') for i in range(n)])
    for i, j in itertools.combinations(range(n), 2):
        if np.allclose(means[i], means[j], rtol=0.0, atol=ATOM_MERGE_ATOL) and np.allclose(
            mats[i], mats[j], rtol=0.0, atol=ATOM_MERGE_ATOL
        ):
            raise DegenerateDeterminantError(
                'duplicate_orbitals', f'orbitals {i} and {j} coincide, the determinant vanishes identically'
            )
    return means, mats


def overlap_matrix(means: np.ndarray, scatters: np.ndarray) -> np.ndarray:
    """Gram matrix of the orbitals: ``N(m_i; m_k, S_i + S_k)``."""
    n = means.shape[0]
    gram = np.empty((n, n))
    for i in range(n):
        for k in range(n):
            gram[i, k] = stats.multivariate_normal.pdf(means[i], mean=means[k], cov=scatters[i] + scatters[k])
    return gram


def _orbital_matrix(means: np.ndarray, scatters: np.ndarray, points: np.ndarray) -> np.ndarray:
    count = points.shape[0]
    n, d = means.shape
    blocks = points.reshape(count * n, d)
    rows = [
        np.atleast_1d(stats.multivariate_normal.pdf(blocks, mean=means[i], cov=scatters[i])).reshape(count, n)
        for i in range(n)
    ]
    return np.stack(rows, axis=1)


def sd_normalization(means, scatters, method: str = 'closed') -> float:
    """Normalization ``Y`` of the squared determinant.

    ``closed`` uses ``Y = n! det(overlap)``; ``quadrature`` integrates the
    squared determinant numerically (at most three coordinates).
    """
    means, mats = _orbitals(means, scatters)
    n, d = means.shape
    if method == 'closed':
        value = math.factorial(n) * float(np.linalg.det(overlap_matrix(means, mats)))
    elif method == 'quadrature':
        if n * d > QUADRATURE_MAX_COORDS:
            raise UnsupportedError('quadrature_dimension', f'quadrature is limited to {QUADRATURE_MAX_COORDS} coordinates')
        spreads = np.sqrt(np.stack([np.diag(mat) for mat in mats]))
        low = (means - QUADRATURE_SIGMAS * spreads).min(axis=0)
        high = (means + QUADRATURE_SIGMAS * spreads).max(axis=0)
        ranges = [(low[k % d], high[k % d]) for k in range(n * d)]

        def integrand(*coords: float) -> float:
            matrix = _orbital_matrix(means, mats, np.asarray(coords).reshape(1, -1))[0]
            return float(np.linalg.det(matrix)) ** 2

        value, _ = integrate.nquad(integrand, ranges, opts={'epsrel': SD_QUAD_EPSREL, 'epsabs': 0.0})
    else:
        raise InvalidInputError('unknown_method', f'unknown normalization method {method!r}')
    if not value > 0.0:
        raise DegenerateDeterminantError('vanishing_normalization', f'normalization constant is {value!r}')
    return value


@dataclass(frozen=True, eq=False)
class SlaterDeterminantAtom:
    """Squared Slater determinant of ``n`` Gaussian orbitals in dimension ``d``."""

    means: np.ndarray
    scatters: np.ndarray

    def __post_init__(self) -> None:
        means, mats = _orbitals(self.means, self.scatters)
        means.setflags(write=False)
        mats.setflags(write=False)
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'scatters', mats)

    @property
    def n(self) -> int:
        return self.means.shape[0]

    @property
    def d(self) -> int:
        return self.means.shape[1]

    @functools.cached_property
    def normalization(self) -> float:
        return sd_normalization(self.means, self.scatters)

    def pdf(self, points) -> np.ndarray:
        """Vectorized density on points of shape ``(N, n*d)``."""
        pts = np.asarray(points, dtype=float)
        size = self.n * self.d
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[1] != size:
            raise InvalidInputError('dimension_mismatch', f'points need {size} coordinates, got shape {np.shape(points)}')
        values = np.linalg.det(_orbital_matrix(self.means, self.scatters, pts)) ** 2 / self.normalization
        blocks = pts.reshape(pts.shape[0], self.n, self.d)
        for i, j in itertools.combinations(range(self.n), 2):
            values[np.all(blocks[:, i, :] == blocks[:, j, :], axis=1)] = 0.0
        return values

    def to_symmetrized(self) -> SymmetrizedAtom:
        return sd_to_symmetrized(self)

    def to_dict(self) -> dict:
        return {'means': self.means.tolist(), 'scatters': self.scatters.tolist()}


def slater_det_density(means, scatters, x) -> float:
    """``|det(G_i(x_j))|^2 / Y``; exactly zero when two blocks of ``x`` coincide."""
    atom = SlaterDeterminantAtom(means, scatters)
    point = np.atleast_1d(np.asarray(x, dtype=float))
    return float(atom.pdf(point.reshape(1, -1))[0])


def sd_to_symmetrized(atom: SlaterDeterminantAtom) -> SymmetrizedAtom:
    n, d = atom.n, atom.d
    block = Atom(gaussian_profile(n * d), atom.means.ravel(), linalg.block_diag(*atom.scatters))
    return SymmetrizedAtom(block, permutation_group(n, d))


def sd_from_symmetrized(abar: SymmetrizedAtom) -> SlaterDeterminantAtom:
    """Inverse of ``sd_to_symmetrized`` for block-diagonal Gaussian representatives."""
    group = abar.group
    if group.kind is not GroupKind.PERMUTATION:
        raise InvalidInputError('group_mismatch', 'Slater determinant atoms correspond to permutation groups')
    n, d = group.n, group.block_dim
    scatter = abar.scatter
    blocks = np.stack([scatter[i * d:(i + 1) * d, i * d:(i + 1) * d] for i in range(n)])
    residue = scatter - linalg.block_diag(*blocks)
    if np.linalg.norm(residue) > BLOCK_DIAGONAL_RTOL * np.linalg.norm(scatter):
        raise InvalidInputError('not_block_diagonal', 'representative scatter is not block diagonal')
    return SlaterDeterminantAtom(abar.mean.reshape(n, d), blocks)


@dataclass(frozen=True, eq=False)
class SlaterMixture:
    """Finite mixture of squared Slater determinants sharing ``(n, d)``."""

    weights: np.ndarray
    atoms: Tuple[SlaterDeterminantAtom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InvalidInputError('empty_mixture', 'a mixture needs at least one component')
        weights = as_vector(self.weights, 'weights')
        if weights.shape[0] != len(self.atoms):
            raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(self.atoms)} atoms')
        if len({(atom.n, atom.d) for atom in self.atoms}) != 1:
            raise InvalidInputError('block_shape_mismatch', 'all Slater atoms must share (n, d)')
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'atoms', tuple(self.atoms))

    @property
    def block_shape(self) -> Tuple[int, int]:
        return self.atoms[0].n, self.atoms[0].d

    def pdf(self, points) -> np.ndarray:
        return sum(weight * atom.pdf(points) for weight, atom in zip(self.weights, self.atoms))

    def to_mixture(self):
        from ..mixtures import Mixture

        return Mixture(self.weights, tuple(sd_to_symmetrized(atom) for atom in self.atoms))

    @classmethod
    def from_mixture(cls, mixture) -> 'SlaterMixture':
        return cls(mixture.weights, tuple(sd_from_symmetrized(atom) for atom in mixture.atoms))


def _check_block_shapes(mu0: SlaterMixture, mu1: SlaterMixture) -> None:
    if mu0.block_shape != mu1.block_shape:
        raise InvalidInputError(
            'block_shape_mismatch', f'Slater mixtures have block shapes {mu0.block_shape} and {mu1.block_shape}'
        )


def sd_mixture_distance(mu0: SlaterMixture, mu1: SlaterMixture) -> float:
    """Mixture distance between squared-Slater-determinant mixtures via their symmetrized images."""
    from ..mixtures import mixture_distance

    _check_block_shapes(mu0, mu1)
    value, _ = mixture_distance(mu0.to_mixture(), mu1.to_mixture())
    return value


def sd_mixture_barycenter_pair(mu0: SlaterMixture, mu1: SlaterMixture, t: float) -> SlaterMixture:
    from ..mixtures import mixture_barycenter_pair

    _check_block_shapes(mu0, mu1)
    return SlaterMixture.from_mixture(mixture_barycenter_pair(mu0.to_mixture(), mu1.to_mixture(), t))


__all__ = [
    'SlaterDeterminantAtom',
    'SlaterMixture',
    'overlap_matrix',
    'sd_from_symmetrized',
    'sd_mixture_barycenter_pair',
    'sd_mixture_distance',
    'sd_normalization',
    'sd_to_symmetrized',
    'slater_det_density',
]
