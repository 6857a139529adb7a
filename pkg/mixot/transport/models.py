"""Sparse transport plan dataclass."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..constants import PLAN_ZERO_TOL

Index = Tuple[int, ...]


@dataclass(frozen=True)
class DiscretePlan:
    """Optimal coupling of two or more weight vectors, stored sparsely.

    ``value`` is the objective in cost units. ``potentials`` holds one dual
    vector per marginal when the solver reports them.
    """

    shape: Tuple[int, ...]
    entries: Tuple[Tuple[Index, float], ...]
    value: float
    potentials: Optional[Tuple[np.ndarray, ...]] = None

    @classmethod
    def from_dense(
        cls,
        dense: np.ndarray,
        value: float,
        potentials: Optional[Tuple[np.ndarray, ...]] = None,
    ) -> 'DiscretePlan':
        dense = np.asarray(dense, dtype=float)
        entries = tuple(
            (tuple(int(i) for i in index), float(dense[index]))
            for index in zip(*np.nonzero(dense > PLAN_ZERO_TOL))
        )
        return cls(tuple(int(n) for n in dense.shape), entries, float(value), potentials)

    @property
    def nonzeros(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Tuple[Index, float]]:
        return iter(self.entries)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape)
        for index, weight in self.entries:
            dense[index] = weight
        return dense

    def marginal(self, axis: int) -> np.ndarray:
        out = np.zeros(self.shape[axis])
        for index, weight in self.entries:
            out[index[axis]] += weight
        return out

    def marginals(self) -> List[np.ndarray]:
        return [self.marginal(axis) for axis in range(len(self.shape))]

    def support(self) -> List[Index]:
        return [index for index, _ in self.entries]

    def to_dict(self) -> Dict:
        if len(self.shape) == 2:
            rows = [{'i': i, 'j': j, 'w': w} for (i, j), w in self.entries]
        else:
            rows = [{'index': list(index), 'w': w} for index, w in self.entries]
        return {'shape': list(self.shape), 'value': self.value, 'entries': rows}


__all__ = ['DiscretePlan', 'Index']
