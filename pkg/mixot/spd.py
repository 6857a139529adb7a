"""Symmetric positive (semi-)definite matrix kernel.

Square roots, the Bures/Gaussian W2 formula, affine optimal transport maps
between location-scatter measures and the barycenter-covariance fixed point.
All functions take plain ``numpy`` arrays and never mutate their inputs.
"""

from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np

from .constants import (
    EIGEN_CLAMP,
    FIXED_POINT_MAX_ITER,
    FIXED_POINT_POLISH_RTOL,
    FIXED_POINT_RTOL,
    SIMPLEX_ATOL,
    SYMMETRY_RTOL,
    W2_NEGATIVE_ATOL,
)
from .errors import ConvergenceError, InvalidInputError, SingularSourceError

logger = logging.getLogger(__name__)


def as_vector(values, name: str = 'vector') -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise InvalidInputError('invalid_shape', f'{name} must be one-dimensional, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError('non_finite', f'{name} contains non-finite entries')
    return arr


def check_spd(matrix, *, degenerate: bool = False, name: str = 'matrix') -> np.ndarray:
    """Validate an SPD matrix and return its symmetrized float copy.

    ``degenerate=True`` admits positive semi-definite matrices.
    """
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidInputError('not_square', f'{name} must be a square matrix, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError('non_finite', f'{name} contains non-finite entries')

    norm = np.linalg.norm(arr, 'fro')
    asym = np.linalg.norm(arr - arr.T, 'fro')
    if asym > SYMMETRY_RTOL * max(norm, np.finfo(float).tiny):
        raise InvalidInputError('not_symmetric', f'{name} is not symmetric (defect {asym:.3e})')
    sym = 0.5 * (arr + arr.T)

    eigvals = np.linalg.eigvalsh(sym)
    dim = sym.shape[0]
    floor = dim * EIGEN_CLAMP * max(float(eigvals[-1]), 0.0)
    if eigvals[0] < -floor:
        raise InvalidInputError('not_positive', f'{name} has a negative eigenvalue {eigvals[0]:.3e}')
    if not degenerate and eigvals[0] <= floor:
        raise InvalidInputError('not_positive_definite', f'{name} is singular (smallest eigenvalue {eigvals[0]:.3e})')
    return sym


def _clamped_eigh(sym: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    eigvals, eigvecs = np.linalg.eigh(sym)
    floor = sym.shape[0] * EIGEN_CLAMP * max(float(eigvals[-1]), 0.0)
    eigvals = np.where(eigvals <= floor, 0.0, eigvals)
    return eigvals, eigvecs


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _sqrt_sym(sym: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = _clamped_eigh(sym)
    return _symmetrize((eigvecs * np.sqrt(eigvals)) @ eigvecs.T)


def _inv_sqrt_sym(sym: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = _clamped_eigh(sym)
    if eigvals[0] <= 0.0:
        raise SingularSourceError('singular_matrix', 'matrix is not invertible')
    return _symmetrize((eigvecs / np.sqrt(eigvals)) @ eigvecs.T)


def sqrt_spd(matrix) -> np.ndarray:
    """Return the symmetric square root via an eigendecomposition.

    Eigenvalues below ``dim * 1e-14 * max eigenvalue`` are clamped to zero,
    so positive semi-definite input is accepted.
    """
    return _sqrt_sym(check_spd(matrix, degenerate=True))


def inv_sqrt_spd(matrix) -> np.ndarray:
    sym = check_spd(matrix, degenerate=True)
    try:
        return _inv_sqrt_sym(sym)
    except SingularSourceError:
        raise SingularSourceError('singular_matrix', 'inverse square root needs a strictly positive definite matrix')


def _check_pair(m0, s0, m1, s1) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    m0 = as_vector(m0, 'm0')
    m1 = as_vector(m1, 'm1')
    s0 = check_spd(s0, degenerate=True, name='S0')
    s1 = check_spd(s1, degenerate=True, name='S1')
    dims = {m0.shape[0], m1.shape[0], s0.shape[0], s1.shape[0]}
    if len(dims) != 1:
        raise InvalidInputError(
            'dimension_mismatch',
            f'dimensions disagree: m0={m0.shape[0]}, S0={s0.shape[0]}, m1={m1.shape[0]}, S1={s1.shape[0]}',
        )
    return m0, s0, m1, s1


def _bures_cross(s0: np.ndarray, s1: np.ndarray) -> np.ndarray:
    root0 = _sqrt_sym(s0)
    return _sqrt_sym(_symmetrize(root0 @ s1 @ root0))


def gaussian_w2_squared(m0, s0, m1, s1) -> float:
    """Squared W2 distance between the location-scatter measures (m0, S0) and (m1, S1)."""
    m0, s0, m1, s1 = _check_pair(m0, s0, m1, s1)
    if np.array_equal(m0, m1) and np.array_equal(s0, s1):
        return 0.0
    cross = _bures_cross(s0, s1)
    diff = m0 - m1
    value = float(diff @ diff + np.trace(s0) + np.trace(s1) - 2.0 * np.trace(cross))
    if value < 0.0:
        scale = 1.0 + float(np.trace(s0) + np.trace(s1))
        if value < -W2_NEGATIVE_ATOL * scale:
            logger.warning('Clamped negative squared W2 value %.3e to zero', value)
        value = 0.0
    return value


def affine_ot_map(m0, s0, m1, s1) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(A, b)`` with ``T(x) = A x + b = m1 + A (x - m0)`` the optimal map."""
    m0, s0, m1, s1 = _check_pair(m0, s0, m1, s1)
    try:
        inv_root0 = _inv_sqrt_sym(s0)
    except SingularSourceError:
        raise SingularSourceError('singular_source', 'the source scatter S0 must be strictly positive definite')
    matrix = _symmetrize(inv_root0 @ _bures_cross(s0, s1) @ inv_root0)
    shift = m1 - matrix @ m0
    return matrix, shift


def check_simplex(weights, name: str = 'weights') -> np.ndarray:
    """Validate barycentric weights and renormalize them exactly."""
    arr = as_vector(weights, name)
    if np.any(arr < 0.0):
        raise InvalidInputError('negative_weight', f'{name} contains negative entries')
    total = float(arr.sum())
    if abs(total - 1.0) > SIMPLEX_ATOL:
        raise InvalidInputError('weights_not_normalized', f'{name} sum to {total!r}, expected 1')
    return arr / total


def _fixed_point_target(root: np.ndarray, weights: np.ndarray, covs: Sequence[np.ndarray]) -> np.ndarray:
    target = np.zeros_like(root)
    for weight, cov in zip(weights, covs):
        if weight == 0.0:
            continue
        target += weight * _sqrt_sym(_symmetrize(root @ cov @ root))
    return _symmetrize(target)


def barycenter_covariance(
    weights,
    covs: Sequence,
    *,
    rtol: float = FIXED_POINT_RTOL,
    max_iter: int = FIXED_POINT_MAX_ITER,
) -> np.ndarray:
    """Solve ``S = sum_q t_q (S^1/2 S_q S^1/2)^1/2`` by the standard fixed-point iteration.

    Starts at the arithmetic mean of the inputs. Once the relative residual is
    below ``rtol`` the iteration keeps polishing while the residual still
    halves, within the same iteration cap.
    """
    weights = check_simplex(weights)
    if len(covs) != weights.shape[0]:
        raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(covs)} covariances')
    if not covs:
        raise InvalidInputError('empty_input', 'at least one covariance is required')
    mats = [check_spd(cov, name=f'covs[{idx}]') for idx, cov in enumerate(covs)]
    if len({mat.shape for mat in mats}) != 1:
        raise InvalidInputError('dimension_mismatch', 'covariances have different shapes')

    active = np.flatnonzero(weights)
    if active.shape[0] == 1:
        return mats[int(active[0])].copy()

    current = _symmetrize(sum(w * mat for w, mat in zip(weights, mats)))
    best = None
    best_residual = np.inf
    residual = np.inf
    for iteration in range(max_iter):
        root = _sqrt_sym(current)
        target = _fixed_point_target(root, weights, mats)
        residual = float(np.linalg.norm(current - target, 'fro') / np.linalg.norm(current, 'fro'))
        logger.debug('fixed point iteration %d residual %.3e', iteration, residual)

        if best is not None and residual > 0.5 * best_residual:
            # Toleranz erreicht
            return best
        if residual <= rtol:
            if best is None or residual < best_residual:
                best, best_residual = current, residual
            if residual <= FIXED_POINT_POLISH_RTOL:
                return best
        inv_root = _inv_sqrt_sym(current)
        current = _symmetrize(inv_root @ target @ target @ inv_root)

    if best is not None:
        return best
    raise ConvergenceError(
        'fixed_point_not_converged',
        f'barycenter covariance did not converge in {max_iter} iterations (residual {residual:.3e})',
        residual=residual,
        iterations=max_iter,
    )


__all__ = [
    'affine_ot_map',
    'as_vector',
    'barycenter_covariance',
    'check_simplex',
    'check_spd',
    'gaussian_w2_squared',
    'inv_sqrt_spd',
    'sqrt_spd',
]
