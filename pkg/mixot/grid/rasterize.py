"""Sampling densities on grids, with automatic bounds for mixtures."""

from __future__ import annotations

import logging
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..atoms import tail_radius
from ..constants import AUTO_BOUNDS_SIGMAS, AUTO_BOUNDS_TAIL_MOMENT, DEFAULT_POINTS_1D, DEFAULT_POINTS_2D
from ..errors import EmptySupportError, InvalidGridError
from ..mixtures import Mixture, mixture_pdf
from ..symmetry import SlaterMixture, SymmetrizedAtom, group_orbit
from .models import GridDensity, GridSpec

logger = logging.getLogger(__name__)

Density = Callable[[np.ndarray], np.ndarray]
Rasterizable = Union[Mixture, SlaterMixture]


def rasterize(density: Density, spec: GridSpec) -> GridDensity:
    """Sample ``density`` on the grid nodes and renormalize to unit mass."""
    values = np.asarray(density(spec.nodes()), dtype=float).reshape(spec.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidGridError('invalid_density', 'density returned non-finite values on the grid')
    values = np.clip(values, 0.0, None)
    mass = float(values.sum() * spec.cell_volume)
    if mass <= 0.0:
        raise EmptySupportError('empty_support', 'density vanishes on every grid node; widen the bounds')
    return GridDensity(spec, values / mass)


def _moment_boxes(mu: Rasterizable) -> List[Tuple[np.ndarray, float, bool]]:
    """(mean, padding radius, rotation-invariant) per effective atom.

    The padding is the largest standard deviation times the generator's
    tail radius, never below ``AUTO_BOUNDS_SIGMAS``.
    """
    if isinstance(mu, SlaterMixture):
        mu = mu.to_mixture()
    boxes = []
    for atom in mu.atoms:
        sigma = float(np.sqrt(np.linalg.eigvalsh(atom.scatter)[-1]))
        pad = max(AUTO_BOUNDS_SIGMAS, tail_radius(atom.generator, AUTO_BOUNDS_TAIL_MOMENT)) * sigma
        if isinstance(atom, SymmetrizedAtom):
            if atom.group.is_finite:
                boxes.extend((image.mean, pad, False) for image in group_orbit(atom.representative, atom.group))
            else:
                boxes.append((atom.mean, pad, True))
        else:
            boxes.append((atom.mean, pad, False))
    return boxes


def auto_bounds(mixtures: Iterable[Rasterizable]) -> Tuple[Tuple[float, float], ...]:
    """Bounds covering every atom of every mixture with its tail padding."""
    boxes = [box for mu in mixtures for box in _moment_boxes(mu)]
    if not boxes:
        raise InvalidGridError('empty_input', 'auto bounds need at least one mixture')
    pad = max(box[1] for box in boxes)
    dim = boxes[0][0].shape[0]
    lows = np.full(dim, np.inf)
    highs = np.full(dim, -np.inf)
    for mean, _, rotating in boxes:
        if rotating:
            radius = float(np.linalg.norm(mean))
            lows = np.minimum(lows, -radius)
            highs = np.maximum(highs, radius)
        else:
            lows = np.minimum(lows, mean)
            highs = np.maximum(highs, mean)
    return tuple((float(lo - pad), float(hi + pad)) for lo, hi in zip(lows, highs))


def default_points(dim: int) -> int:
    return DEFAULT_POINTS_1D if dim == 1 else DEFAULT_POINTS_2D


def auto_spec(
    mixtures: Sequence[Rasterizable],
    points: Optional[Union[int, Sequence[int]]] = None,
    bounds: Optional[Sequence[Sequence[float]]] = None,
) -> GridSpec:
    """Grid shared by several mixtures; bounds default to the padded atom boxes."""
    resolved = bounds if bounds is not None else auto_bounds(mixtures)
    if points is None:
        points = default_points(len(resolved))
    return GridSpec.uniform(resolved, points)


def density_function(mu: Rasterizable) -> Density:
    if isinstance(mu, SlaterMixture):
        return mu.pdf
    return lambda nodes: mixture_pdf(mu, nodes)


def rasterize_mixture(
    mu: Rasterizable,
    spec: Optional[GridSpec] = None,
    points: Optional[Union[int, Sequence[int]]] = None,
) -> GridDensity:
    spec = spec or auto_spec([mu], points)
    dim = mu.atoms[0].n * mu.atoms[0].d if isinstance(mu, SlaterMixture) else mu.dim
    if spec.dim != dim:
        raise InvalidGridError('dimension_mismatch', f'{spec.dim}D grid for a {dim}-dimensional density')
    logger.debug('Rasterizing mixture on grid %s', spec.to_dict())
    return rasterize(density_function(mu), spec)


__all__ = ['auto_bounds', 'auto_spec', 'default_points', 'density_function', 'rasterize', 'rasterize_mixture']
