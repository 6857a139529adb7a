"""Symmetry groups acting on atoms by linear isometries."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..atoms import Atom
from ..errors import InvalidInputError, UnsupportedError

ISOMETRY_ATOL = 1e-12


class GroupKind(str, Enum):
    PARITY = 'parity'
    PERMUTATION = 'permutation'
    SO2 = 'so2'


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Orthogonal matrix acting by ``x -> matrix x``."""

    matrix: np.ndarray
    label: str
    angle: Optional[float] = None

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float, copy=True)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    def act(self, atom: Atom) -> Atom:
        return atom.pushforward(self.matrix)

    def to_dict(self) -> dict:
        payload = {'label': self.label}
        if self.angle is not None:
            payload['angle'] = self.angle
        return payload


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def permutation_matrix(order: Tuple[int, ...], block_dim: int) -> np.ndarray:
    """Block matrix mapping block ``sigma(i)`` of the input to block ``i`` of the output."""
    n = len(order)
    base = np.zeros((n, n))
    for i, source in enumerate(order):
        base[i, source] = 1.0
    return np.kron(base, np.eye(block_dim))


@dataclass(frozen=True)
class SymmetryGroup:
    """Parity, block permutation or planar rotation group.

    Finite kinds carry an explicit element list with uniform Haar weights;
    SO2 is the one-parameter rotation family in dimension 2.
    """

    kind: GroupKind
    dim: int
    n: Optional[int] = None
    block_dim: Optional[int] = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInputError('invalid_dimension', 'group dimension must be positive')
        if self.kind is GroupKind.PERMUTATION:
            if not self.n or not self.block_dim or self.n * self.block_dim != self.dim or self.n < 1:
                raise InvalidInputError('invalid_group', 'permutation groups need n * d == dim')
        if self.kind is GroupKind.SO2 and self.dim != 2:
            raise UnsupportedError('unsupported_dimension', 'SO(2) acts in dimension 2 only')

    @property
    def is_finite(self) -> bool:
        return self.kind is not GroupKind.SO2

    def elements(self) -> Tuple[GroupElement, ...]:
        """All elements, identity first (finite kinds only)."""
        if not self.is_finite:
            raise UnsupportedError('continuous_group', 'SO(2) has no finite element list; use so2_align')
        return _finite_elements(self)

    @property
    def order(self) -> int:
        return len(self.elements())

    def haar_weights(self) -> np.ndarray:
        count = self.order
        return np.full(count, 1.0 / count)

    def identity(self) -> GroupElement:
        if self.is_finite:
            return self.elements()[0]
        return self.rotation(0.0)

    def rotation(self, angle: float) -> GroupElement:
        if self.kind is not GroupKind.SO2:
            raise UnsupportedError('unsupported_group', 'rotations belong to SO(2)')
        angle = float(angle) % (2.0 * math.pi)
        return GroupElement(rotation_matrix(angle), f'rot({angle:.12g})', angle)

    def check(self) -> None:
        """Verify isometry, closure and inverses exhaustively (finite kinds)."""
        elements = self.elements()
        matrices = [element.matrix for element in elements]
        eye = np.eye(self.dim)
        for element in elements:
            if not np.allclose(element.matrix @ element.matrix.T, eye, rtol=0.0, atol=ISOMETRY_ATOL):
                raise InvalidInputError('not_isometry', f'{element.label} is not orthogonal')

        def contains(candidate: np.ndarray) -> bool:
            return any(np.allclose(candidate, other, rtol=0.0, atol=ISOMETRY_ATOL) for other in matrices)

        for left, right in itertools.product(matrices, repeat=2):
            if not contains(left @ right):
                raise InvalidInputError('not_closed', 'group is not closed under composition')
        for matrix in matrices:
            if not contains(matrix.T):
                raise InvalidInputError('not_closed', 'group is not closed under inverses')

    def to_dict(self) -> dict:
        payload = {'kind': self.kind.value}
        if self.kind is GroupKind.PERMUTATION:
            payload['n'] = int(self.n)
            payload['d'] = int(self.block_dim)
        else:
            payload['d'] = int(self.dim)
        return payload


@functools.lru_cache(maxsize=64)
def _finite_elements(group: SymmetryGroup) -> Tuple[GroupElement, ...]:
    if group.kind is GroupKind.PARITY:
        return (
            GroupElement(np.eye(group.dim), 'e'),
            GroupElement(-np.eye(group.dim), 'parity'),
        )
    elements = []
    for order in itertools.permutations(range(group.n)):
        label = 'e' if order == tuple(range(group.n)) else 'perm(' + ','.join(str(i) for i in order) + ')'
        elements.append(GroupElement(permutation_matrix(order, group.block_dim), label))
    return tuple(elements)


def parity_group(dim: int) -> SymmetryGroup:
    return SymmetryGroup(GroupKind.PARITY, int(dim))


def permutation_group(n: int, block_dim: int) -> SymmetryGroup:
    return SymmetryGroup(GroupKind.PERMUTATION, int(n) * int(block_dim), int(n), int(block_dim))


def so2_group() -> SymmetryGroup:
    return SymmetryGroup(GroupKind.SO2, 2)


def build_group(kind: str, dim: int, n: Optional[int] = None, d: Optional[int] = None) -> SymmetryGroup:
    """Construct a group from its serialized description."""
    if kind == GroupKind.PARITY.value:
        return parity_group(dim)
    if kind == GroupKind.PERMUTATION.value:
        if n is None or d is None:
            raise InvalidInputError('invalid_group', 'permutation groups need n and d')
        group = permutation_group(n, d)
        if group.dim != dim:
            raise InvalidInputError('dimension_mismatch', f'permutation group acts in dimension {group.dim}, family has {dim}')
        return group
    if kind == GroupKind.SO2.value:
        if dim != 2:
            raise UnsupportedError('unsupported_dimension', 'SO(2) acts in dimension 2 only')
        return so2_group()
    raise InvalidInputError('unknown_group', f'unknown group kind {kind!r}')


__all__ = [
    'GroupElement',
    'GroupKind',
    'SymmetryGroup',
    'build_group',
    'parity_group',
    'permutation_group',
    'permutation_matrix',
    'rotation_matrix',
    'so2_group',
]
