"""Symmetrized atoms, the quotient metric and symmetric barycenters."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..atoms import Atom, atom_barycenter, atom_pdf, atom_w2_squared, ensure_same_family
from ..constants import ATOM_MERGE_ATOL, SO2_ANGLE_TOL, SO2_DENSITY_ANGLES, SO2_SCAN_POINTS, SYM_CAPACITY
from ..errors import CapacityError, InvalidInputError, UnsupportedError
from ..spd import check_simplex, gaussian_w2_squared
from ..workers import parallel_map
from .groups import GroupElement, GroupKind, SymmetryGroup, rotation_matrix

logger = logging.getLogger(__name__)

CENTERED_ATOL = 1e-12


def _so2_canonical(atom: Atom) -> Atom:
    mean = atom.mean
    if float(np.hypot(mean[0], mean[1])) > CENTERED_ATOL:
        angle = math.atan2(mean[1], mean[0])
    else:
        eigvals, eigvecs = np.linalg.eigh(atom.scatter)
        if eigvals[1] - eigvals[0] <= CENTERED_ATOL * max(eigvals[1], 1.0):
            return atom
        principal = eigvecs[:, 1]
        angle = math.atan2(principal[1], principal[0]) % math.pi
    if angle == 0.0:
        return atom
    return atom.pushforward(rotation_matrix(-angle))


def canonical_representative(atom: Atom, group: SymmetryGroup) -> Atom:
    """Deterministic orbit member used as the stored representative.

    Finite groups pick the lexicographically smallest orbit member; SO(2)
    rotates the mean onto the positive first axis (or the principal scatter
    axis for centered atoms).
    """
    if group.kind is GroupKind.SO2:
        return _so2_canonical(atom)
    return min((element.act(atom) for element in group.elements()), key=Atom.key)


@dataclass(frozen=True, eq=False)
class SymmetrizedAtom:
    """Group average of ``representative`` over ``group``."""

    representative: Atom
    group: SymmetryGroup

    def __post_init__(self) -> None:
        if not self.representative.generator.is_elliptical:
            raise UnsupportedError(
                'unsupported_profile',
                'group actions through moments need an orthogonally invariant (elliptical) generator',
            )
        if self.representative.dim != self.group.dim:
            raise InvalidInputError(
                'dimension_mismatch',
                f'group acts in dimension {self.group.dim}, atom has dimension {self.representative.dim}',
            )
        object.__setattr__(self, 'representative', canonical_representative(self.representative, self.group))

    @property
    def generator(self):
        return self.representative.generator

    @property
    def dim(self) -> int:
        return self.representative.dim

    @property
    def mean(self) -> np.ndarray:
        return self.representative.mean

    @property
    def scatter(self) -> np.ndarray:
        return self.representative.scatter

    def key(self) -> Tuple[float, ...]:
        return self.representative.key()

    def is_close(self, other: 'SymmetrizedAtom', atol: float) -> bool:
        if not isinstance(other, SymmetrizedAtom) or self.group != other.group:
            return False
        if self.group.kind is GroupKind.SO2:
            return self.representative.is_close(other.representative, atol)
        return any(element.act(self.representative).is_close(other.representative, atol) for element in self.group.elements())

    def to_dict(self) -> dict:
        return self.representative.to_dict()


def symmetrize(atom: Atom, group: SymmetryGroup) -> SymmetrizedAtom:
    return SymmetrizedAtom(atom, group)


def group_orbit(atom: Atom, group: SymmetryGroup) -> List[Atom]:
    """Distinct images ``g.a`` for a finite group, in element order."""
    if not group.is_finite:
        raise UnsupportedError('continuous_group', 'SO(2) orbits are continuous; use so2_align')
    orbit: List[Atom] = []
    for element in group.elements():
        image = element.act(atom)
        if not any(image.is_close(existing, ATOM_MERGE_ATOL) for existing in orbit):
            orbit.append(image)
    return orbit


def _check_compatible(abars: Sequence[SymmetrizedAtom]) -> SymmetryGroup:
    if not abars:
        raise InvalidInputError('empty_input', 'at least one symmetrized atom is required')
    group = abars[0].group
    for abar in abars[1:]:
        if abar.group != group:
            raise InvalidInputError('group_mismatch', f'symmetry groups differ: {group.to_dict()} vs {abar.group.to_dict()}')
    ensure_same_family([abar.representative for abar in abars])
    return group


def so2_align(a0: Atom, a1: Atom) -> Tuple[float, float]:
    """Angle minimizing ``W2(a0, R_theta a1)`` and the attained distance."""
    if a0.dim != 2 or a1.dim != 2:
        raise UnsupportedError('unsupported_dimension', f'so2_align needs 2-dimensional atoms, got {a0.dim} and {a1.dim}')
    ensure_same_family([a0, a1])

    def objective(theta: float) -> float:
        rot = rotation_matrix(theta)
        scatter = rot @ a1.scatter @ rot.T
        return gaussian_w2_squared(a0.mean, a0.scatter, rot @ a1.mean, 0.5 * (scatter + scatter.T))

    step = 2.0 * math.pi / SO2_SCAN_POINTS
    scan = [objective(i * step) for i in range(SO2_SCAN_POINTS)]
    best = int(np.argmin(scan))
    center = best * step
    # Brent auf dem Nachbarintervall, xatol ist absolut
    refined = minimize_scalar(
        objective,
        bounds=(center - step, center + step),
        method='bounded',
        options={'xatol': SO2_ANGLE_TOL},
    )
    if refined.success and float(refined.fun) <= scan[best]:
        angle, value = float(refined.x), float(refined.fun)
    else:
        angle, value = center, scan[best]
    return angle % (2.0 * math.pi), math.sqrt(max(value, 0.0))


def sym_distance(a0bar: SymmetrizedAtom, a1bar: SymmetrizedAtom) -> Tuple[float, GroupElement]:
    """Quotient distance ``min_g W2(a0, g.a1)`` and a minimizing element."""
    group = _check_compatible([a0bar, a1bar])
    a0, a1 = a0bar.representative, a1bar.representative
    if group.kind is GroupKind.SO2:
        angle, value = so2_align(a0, a1)
        return value, group.rotation(angle)
    best_value = math.inf
    best_element = group.identity()
    for element in group.elements():
        value = atom_w2_squared(a0, element.act(a1))
        if value < best_value:
            best_value, best_element = value, element
    return math.sqrt(best_value), best_element


def _barycentric_value(weights: np.ndarray, atoms: Sequence[Atom]) -> float:
    bar = atom_barycenter(weights, atoms)
    return float(sum(w * atom_w2_squared(atom, bar) for w, atom in zip(weights, atoms) if w > 0.0))


def sym_multimarginal(abars: Sequence[SymmetrizedAtom], weights) -> Tuple[float, List[GroupElement]]:
    """Symmetric multi-marginal cost (square root) and the aligning elements.

    The first element is fixed to the identity since the cost is invariant
    under a simultaneous action on all inputs.
    """
    weights = check_simplex(weights)
    if len(abars) != weights.shape[0]:
        raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(abars)} atoms')
    group = _check_compatible(abars)
    count = len(abars)
    if count == 1:
        return 0.0, [group.identity()]

    if group.kind is GroupKind.SO2:
        if count != 2:
            raise UnsupportedError('unsupported_group', 'SO(2) multi-marginal alignment is available for Q=2 only')
        angle, value = so2_align(abars[0].representative, abars[1].representative)
        return math.sqrt(weights[0] * weights[1]) * value, [group.identity(), group.rotation(angle)]

    elements = group.elements()
    combinations = len(elements) ** (count - 1)
    if combinations > SYM_CAPACITY:
        raise CapacityError('symmetry_capacity', f'{combinations} group tuples exceed the limit {SYM_CAPACITY}')

    tuples = [(elements[0],) + rest for rest in itertools.product(elements, repeat=count - 1)]

    def evaluate(choice: Tuple[GroupElement, ...]) -> float:
        aligned = [element.act(abar.representative) for element, abar in zip(choice, abars)]
        return _barycentric_value(weights, aligned)

    values = parallel_map(evaluate, tuples)
    best = int(np.argmin(values))
    logger.debug('symmetric multi-marginal over %d tuples, best %s', len(tuples), [e.label for e in tuples[best]])
    return math.sqrt(max(values[best], 0.0)), list(tuples[best])


def sym_barycenter(abars: Sequence[SymmetrizedAtom], weights) -> SymmetrizedAtom:
    """Symmetrization of the barycenter of the optimally aligned representatives."""
    weights = check_simplex(weights)
    if len(abars) == 1:
        return abars[0]
    _, elements = sym_multimarginal(abars, weights)
    aligned = [element.act(abar.representative) for element, abar in zip(elements, abars)]
    return SymmetrizedAtom(atom_barycenter(weights, aligned), abars[0].group)


def sym_pdf(abar: SymmetrizedAtom, points) -> np.ndarray:
    """Density of the group average; SO(2) uses a periodic trapezoid rule in the angle."""
    group = abar.group
    if group.is_finite:
        elements = group.elements()
        total = sum(atom_pdf(element.act(abar.representative), points) for element in elements)
        return total / len(elements)
    angles = 2.0 * math.pi * np.arange(SO2_DENSITY_ANGLES) / SO2_DENSITY_ANGLES
    total = sum(atom_pdf(abar.representative.pushforward(rotation_matrix(angle)), points) for angle in angles)
    return total / SO2_DENSITY_ANGLES


__all__ = [
    'SymmetrizedAtom',
    'canonical_representative',
    'group_orbit',
    'so2_align',
    'sym_barycenter',
    'sym_distance',
    'sym_multimarginal',
    'sym_pdf',
    'symmetrize',
]
