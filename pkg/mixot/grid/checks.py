"""Invariance checks for grid densities."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from ..errors import InvalidGridError, UnsupportedError
from ..symmetry import GroupElement, SymmetryGroup
from .models import GridDensity, GridSpec

BOUNDS_RTOL = 1e-12


def _signed_axes(matrix: np.ndarray) -> List[Tuple[int, float]]:
    """For each output axis the source axis and sign of a signed permutation matrix."""
    mapping = []
    for row in np.asarray(matrix):
        nonzero = np.flatnonzero(np.abs(row) > 0.5)
        if nonzero.size != 1 or not np.isclose(abs(row[nonzero[0]]), 1.0):
            raise UnsupportedError('unsupported_group', 'grid actions need signed permutation matrices')
        mapping.append((int(nonzero[0]), float(np.sign(row[nonzero[0]]))))
    return mapping


def _check_axis(spec: GridSpec, target: int, source: int, sign: float) -> None:
    lo, hi = spec.bounds[source]
    if sign < 0:
        lo, hi = -hi, -lo
    t_lo, t_hi = spec.bounds[target]
    scale = max(abs(t_lo), abs(t_hi), 1.0)
    if (
        spec.points[source] != spec.points[target]
        or abs(lo - t_lo) > BOUNDS_RTOL * scale
        or abs(hi - t_hi) > BOUNDS_RTOL * scale
    ):
        raise InvalidGridError('grid_not_symmetric', f'grid axes {source} -> {target} are not mapped onto each other')


def act_on_grid(density: GridDensity, element: GroupElement) -> GridDensity:
    """Push a grid density forward by a signed permutation: ``(g.p)(x) = p(g^T x)``."""
    spec = density.spec
    if element.matrix.shape != (spec.dim, spec.dim):
        raise InvalidGridError('dimension_mismatch', f'{element.matrix.shape[0]}D group on a {spec.dim}D grid')
    mapping = _signed_axes(element.matrix)
    for target, (source, sign) in enumerate(mapping):
        _check_axis(spec, target, source, sign)
    values = np.transpose(density.values, axes=[source for source, _ in mapping])
    flips = tuple(target for target, (_, sign) in enumerate(mapping) if sign < 0)
    if flips:
        values = np.flip(values, axis=flips)
    return GridDensity(spec, values)


def symmetry_defect(density: GridDensity, group: SymmetryGroup) -> float:
    """Largest L1 distance between ``density`` and one of its group images."""
    if not group.is_finite:
        raise UnsupportedError('continuous_group', 'SO(2) does not map a tensor grid onto itself')
    if group.dim != density.spec.dim:
        raise InvalidGridError('dimension_mismatch', f'group acts in dimension {group.dim}, grid has {density.spec.dim}')
    return max(density.l1_distance(act_on_grid(density, element)) for element in group.elements())


__all__ = ['act_on_grid', 'symmetry_defect']
