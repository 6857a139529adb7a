"""Atom-level operations dispatched on plain versus symmetrized atoms."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..atoms import Atom, atom_barycenter, atom_pdf, atom_w2, atom_w2_squared
from ..errors import InvalidInputError
from ..symmetry.symmetrized import SymmetrizedAtom, sym_barycenter, sym_distance, sym_multimarginal, sym_pdf
from .models import MixtureAtom


def atom_distance(a0: MixtureAtom, a1: MixtureAtom) -> float:
    if isinstance(a0, SymmetrizedAtom) and isinstance(a1, SymmetrizedAtom):
        return sym_distance(a0, a1)[0]
    if isinstance(a0, Atom) and isinstance(a1, Atom):
        return atom_w2(a0, a1)
    raise InvalidInputError('invalid_atom', 'cannot compare symmetrized and plain atoms')


def barycenter(weights, atoms: Sequence[MixtureAtom]) -> MixtureAtom:
    if isinstance(atoms[0], SymmetrizedAtom):
        return sym_barycenter(atoms, weights)
    return atom_barycenter(weights, atoms)


def geodesic(a0: MixtureAtom, a1: MixtureAtom, t: float) -> MixtureAtom:
    if t == 0.0:
        return a0
    if t == 1.0:
        return a1
    return barycenter((1.0 - t, t), (a0, a1))


def barycentric_cost(weights: np.ndarray, atoms: Sequence[MixtureAtom]):
    """Return ``(sum_q t_q W2(a_q, bar)^2, bar)`` for one tuple of atoms."""
    if isinstance(atoms[0], SymmetrizedAtom):
        value, _ = sym_multimarginal(atoms, weights)
        return value * value, sym_barycenter(atoms, weights)
    bar = atom_barycenter(weights, atoms)
    cost = sum(w * atom_w2_squared(atom, bar) for w, atom in zip(weights, atoms) if w > 0.0)
    return float(cost), bar


def pdf(atom: MixtureAtom, points) -> np.ndarray:
    if isinstance(atom, SymmetrizedAtom):
        return sym_pdf(atom, points)
    return atom_pdf(atom, points)


__all__ = ['atom_distance', 'barycenter', 'barycentric_cost', 'geodesic', 'pdf']
