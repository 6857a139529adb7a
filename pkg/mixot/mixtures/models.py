"""Mixture dataclass."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union

import numpy as np

from ..atoms import Atom
from ..errors import FamilyMismatchError, InvalidInputError
from ..spd import as_vector
from ..symmetry.symmetrized import SymmetrizedAtom

MixtureAtom = Union[Atom, SymmetrizedAtom]


def family_of(atom: MixtureAtom) -> tuple:
    """Hashable family identity: generator, plus group for symmetrized atoms."""
    if isinstance(atom, SymmetrizedAtom):
        return ('symmetrized', atom.generator, atom.group)
    if isinstance(atom, Atom):
        return ('atom', atom.generator, None)
    raise InvalidInputError('invalid_atom', f'unsupported atom type {type(atom).__name__}')


@dataclass(frozen=True, eq=False)
class Mixture:
    """Finite convex combination of atoms from one family."""

    weights: np.ndarray
    atoms: Tuple[MixtureAtom, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise InvalidInputError('empty_mixture', 'a mixture needs at least one component')
        weights = as_vector(self.weights, 'weights')
        if weights.shape[0] != len(atoms):
            raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(atoms)} atoms')
        if np.any(weights < 0.0):
            raise InvalidInputError('negative_weight', 'mixture weights must be nonnegative')
        family = family_of(atoms[0])
        for atom in atoms[1:]:
            if family_of(atom) != family:
                raise FamilyMismatchError('family_mismatch', 'all atoms of a mixture must share one family')
        weights = weights.copy()
        weights.setflags(write=False)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'atoms', atoms)

    @classmethod
    def from_components(cls, components: Iterable[Tuple[float, MixtureAtom]]) -> 'Mixture':
        pairs = list(components)
        return cls(np.array([weight for weight, _ in pairs], dtype=float), tuple(atom for _, atom in pairs))

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    @property
    def family(self) -> tuple:
        return family_of(self.atoms[0])

    @property
    def is_symmetrized(self) -> bool:
        return isinstance(self.atoms[0], SymmetrizedAtom)

    def components(self) -> Iterator[Tuple[float, MixtureAtom]]:
        return zip(self.weights.tolist(), self.atoms)

    def to_dict(self) -> dict:
        return {
            'components': [
                {'weight': weight, **atom.to_dict()} for weight, atom in self.components()
            ]
        }


__all__ = ['Mixture', 'MixtureAtom', 'family_of']
