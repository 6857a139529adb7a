"""Atom dataclass: one location-scatter measure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidInputError
from ..spd import as_vector, check_spd
from .profiles import GeneratorProfile


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Atom:
    """Push-forward of a generator by ``y -> mean + scatter^1/2 y``.

    The mean and covariance of the measure are exactly ``mean`` and
    ``scatter`` because every generator is standardized.
    """

    generator: GeneratorProfile
    mean: np.ndarray
    scatter: np.ndarray

    def __post_init__(self) -> None:
        mean = as_vector(self.mean, 'mean')
        scatter = check_spd(self.scatter, name='scatter')
        if mean.shape[0] != self.generator.dim or scatter.shape[0] != self.generator.dim:
            raise InvalidInputError(
                'dimension_mismatch',
                f'atom of a {self.generator.dim}-dimensional family got mean of length {mean.shape[0]} '
                f'and scatter of size {scatter.shape[0]}',
            )
        object.__setattr__(self, 'mean', _frozen(mean))
        object.__setattr__(self, 'scatter', _frozen(scatter))

    @property
    def dim(self) -> int:
        return self.generator.dim

    def with_moments(self, mean, scatter) -> 'Atom':
        return Atom(self.generator, mean, scatter)

    def pushforward(self, matrix, shift: Optional[np.ndarray] = None) -> 'Atom':
        """Image under ``x -> matrix x + shift`` for an orthogonal ``matrix``."""
        matrix = np.asarray(matrix, dtype=float)
        mean = matrix @ self.mean
        if shift is not None:
            mean = mean + np.asarray(shift, dtype=float)
        scatter = matrix @ self.scatter @ matrix.T
        return Atom(self.generator, mean, 0.5 * (scatter + scatter.T))

    def key(self) -> Tuple[float, ...]:
        """Lexicographic ordering key (mean first, then scatter entries)."""
        return tuple(self.mean.tolist()) + tuple(self.scatter.ravel().tolist())

    def is_close(self, other: 'Atom', atol: float) -> bool:
        if self.generator != other.generator:
            return False
        return bool(
            np.allclose(self.mean, other.mean, rtol=0.0, atol=atol)
            and np.allclose(self.scatter, other.scatter, rtol=0.0, atol=atol)
        )

    def to_dict(self) -> dict:
        return {'mean': self.mean.tolist(), 'scatter': self.scatter.tolist()}


__all__ = ['Atom']
