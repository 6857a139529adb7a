"""Canonical normal form of mixtures."""

from __future__ import annotations

from typing import List

import numpy as np

from ..constants import ATOM_MERGE_ATOL, SIMPLEX_ATOL
from ..errors import InvalidInputError
from .models import Mixture, MixtureAtom

# genau so viel Spiel, dass eine bereits normierte Mischung nicht nochmal umgerechnet wird
RENORMALIZE_ATOL = 1e-15


def canonicalize(mu: Mixture) -> Mixture:
    """Drop zero weights, merge equal atoms and sort components.

    Sorting uses the lexicographic (mean, scatter) key of the stored
    representatives. Canonical input comes back unchanged.
    """
    total = float(mu.weights.sum())
    if abs(total - 1.0) > SIMPLEX_ATOL:
        raise InvalidInputError('weights_not_normalized', f'mixture weights sum to {total!r}, expected 1')

    merged_atoms: List[MixtureAtom] = []
    merged_weights: List[float] = []
    for weight, atom in mu.components():
        if weight <= 0.0:
            continue
        for idx, existing in enumerate(merged_atoms):
            if existing.is_close(atom, ATOM_MERGE_ATOL):
                merged_weights[idx] += weight
                break
        else:
            merged_atoms.append(atom)
            merged_weights.append(weight)
    if not merged_atoms:
        raise InvalidInputError('empty_mixture', 'mixture has no component with positive weight')

    order = sorted(range(len(merged_atoms)), key=lambda idx: merged_atoms[idx].key())
    weights = np.array([merged_weights[idx] for idx in order])
    total = float(weights.sum())
    if abs(total - 1.0) > RENORMALIZE_ATOL * len(weights):
        weights = weights / total
    return Mixture(weights, tuple(merged_atoms[idx] for idx in order))


def is_canonical(mu: Mixture) -> bool:
    canonical = canonicalize(mu)
    if canonical.size != mu.size:
        return False
    return all(a is b for a, b in zip(canonical.atoms, mu.atoms)) and np.array_equal(canonical.weights, mu.weights)


__all__ = ['canonicalize', 'is_canonical']
