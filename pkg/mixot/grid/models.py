"""Regular grids and densities sampled on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import InvalidGridError


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid with uniform spacing; ``bounds`` holds one (low, high) pair per axis."""

    bounds: Tuple[Tuple[float, float], ...]
    points: Tuple[int, ...]

    def __post_init__(self) -> None:
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        points = tuple(int(n) for n in self.points)
        if len(bounds) not in (1, 2):
            raise InvalidGridError('unsupported_grid_dim', f'grids are 1D or 2D, got {len(bounds)} axes')
        if len(points) != len(bounds):
            raise InvalidGridError('invalid_grid', 'bounds and points must have the same number of axes')
        for axis, ((lo, hi), count) in enumerate(zip(bounds, points)):
            if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
                raise InvalidGridError('invalid_bounds', f'axis {axis}: need finite low < high, got ({lo}, {hi})')
            if count < 2:
                raise InvalidGridError('invalid_points', f'axis {axis}: need at least 2 points, got {count}')
        object.__setattr__(self, 'bounds', bounds)
        object.__setattr__(self, 'points', points)

    @classmethod
    def uniform(cls, bounds: Sequence[Sequence[float]], points: int | Sequence[int]) -> 'GridSpec':
        if isinstance(points, (int, np.integer)):
            points = (int(points),) * len(bounds)
        return cls(tuple(tuple(pair) for pair in bounds), tuple(points))

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    def axes(self) -> List[np.ndarray]:
        return [np.linspace(lo, hi, count) for (lo, hi), count in zip(self.bounds, self.points)]

    def spacing(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (count - 1) for (lo, hi), count in zip(self.bounds, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing()))

    @property
    def diameter_squared(self) -> float:
        return float(sum((hi - lo) ** 2 for lo, hi in self.bounds))

    def nodes(self) -> np.ndarray:
        """Node coordinates in row-major order, shape ``(size, dim)``."""
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def to_dict(self) -> dict:
        return {'bounds': [list(pair) for pair in self.bounds], 'points': list(self.points)}


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Nonnegative node values whose uniform-cell mass is one."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.spec.shape:
            values = values.reshape(self.spec.shape)
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise InvalidGridError('invalid_density', 'grid densities must be finite and nonnegative')
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.spec.cell_volume)

    def probabilities(self) -> np.ndarray:
        """Node masses in row-major order."""
        return self.values.ravel() * self.spec.cell_volume

    def normalized(self) -> 'GridDensity':
        mass = self.mass
        if mass <= 0.0:
            raise InvalidGridError('zero_mass', 'cannot normalize a density without mass')
        return GridDensity(self.spec, self.values / mass)

    def l1_distance(self, other: 'GridDensity') -> float:
        ensure_same_spec([self, other])
        return float(np.abs(self.values - other.values).sum() * self.spec.cell_volume)

    def rows(self) -> List[Tuple[float, ...]]:
        """``(x[, y], value)`` tuples in row-major order."""
        nodes = self.spec.nodes()
        return [tuple(node.tolist()) + (float(value),) for node, value in zip(nodes, self.values.ravel())]


def ensure_same_spec(densities: Sequence[GridDensity]) -> GridSpec:
    if not densities:
        raise InvalidGridError('empty_input', 'at least one density is required')
    spec = densities[0].spec
    for density in densities[1:]:
        if density.spec != spec:
            raise InvalidGridError('spec_mismatch', 'densities live on different grids')
    return spec


__all__ = ['GridDensity', 'GridSpec', 'ensure_same_spec']
