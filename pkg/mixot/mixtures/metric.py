"""Mixture Wasserstein distance, geodesics and barycenters."""

from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from ..constants import MULTIMARGINAL_CAPACITY
from ..errors import CapacityError, FamilyMismatchError, InvalidInputError, UnsupportedError
from ..spd import check_simplex
from ..transport import DiscretePlan, solve_multimarginal, solve_transport
from ..workers import parallel_map
from . import atomic
from .canonical import canonicalize, is_canonical
from .models import Mixture, MixtureAtom

logger = logging.getLogger(__name__)

AtomMetric = Callable[[MixtureAtom, MixtureAtom], float]


def _check_family(mus: Sequence[Mixture]) -> None:
    family = mus[0].family
    for mu in mus[1:]:
        if mu.family != family:
            raise FamilyMismatchError('family_mismatch', 'mixtures are built from different atom families')


def atom_distance_matrix(mu0: Mixture, mu1: Mixture, atom_metric: Optional[AtomMetric] = None) -> np.ndarray:
    """Pairwise atom distances ``D[j, k] = delta(a0_j, a1_k)``."""
    metric = atom_metric or atomic.atom_distance
    pairs = list(itertools.product(mu0.atoms, mu1.atoms))
    values = parallel_map(lambda pair: metric(pair[0], pair[1]), pairs)
    return np.asarray(values, dtype=float).reshape(mu0.size, mu1.size)


def _same_mixture(c0: Mixture, c1: Mixture) -> bool:
    if c0.size != c1.size or c0.family != c1.family or not np.array_equal(c0.weights, c1.weights):
        return False
    return all(a is b or a.is_close(b, 0.0) for a, b in zip(c0.atoms, c1.atoms))


def _diagonal_plan(mu: Mixture) -> DiscretePlan:
    entries = tuple(((k, k), float(w)) for k, w in enumerate(mu.weights))
    return DiscretePlan((mu.size, mu.size), entries, 0.0)


def mixture_distance(
    mu0: Mixture,
    mu1: Mixture,
    p: float = 2.0,
    *,
    atom_metric: Optional[AtomMetric] = None,
    atom_distances=None,
) -> Tuple[float, DiscretePlan]:
    """Mixture distance of order ``p`` and the optimal weight coupling.

    The closed-form atom metric is W2, so ``p != 2`` needs either an
    ``atom_metric`` callable or ``atom_distances``, a matrix over the
    components of canonical inputs. Plan indices refer to canonical order.
    """
    p = float(p)
    if not p > 1.0 or not math.isfinite(p):
        raise InvalidInputError('invalid_order', f'p must be a finite number > 1, got {p}')
    if atom_distances is None and atom_metric is None:
        _check_family([mu0, mu1])
        if p != 2.0:
            raise UnsupportedError('closed_form_requires_p2', 'closed-form atom distances exist for p = 2 only')

    if atom_distances is not None:
        if not (is_canonical(mu0) and is_canonical(mu1)):
            raise InvalidInputError('non_canonical_input', 'an explicit distance matrix needs canonical mixtures')
        c0, c1 = mu0, mu1
        distances = np.asarray(atom_distances, dtype=float)
        if distances.shape != (c0.size, c1.size):
            raise InvalidInputError('shape_mismatch', f'distance matrix has shape {distances.shape}, expected {(c0.size, c1.size)}')
    else:
        c0, c1 = canonicalize(mu0), canonicalize(mu1)
        if _same_mixture(c0, c1):
            return 0.0, _diagonal_plan(c0)
        distances = atom_distance_matrix(c0, c1, atom_metric)

    plan = solve_transport(c0.weights, c1.weights, distances**p)
    value = max(plan.value, 0.0) ** (1.0 / p)
    return value, plan


def mixture_barycenter_pair(mu0: Mixture, mu1: Mixture, t: float) -> Mixture:
    """Point at time ``t`` on the mixture geodesic (optimal plan, atom geodesics)."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidInputError('invalid_time', f't must lie in [0, 1], got {t}')
    _check_family([mu0, mu1])
    c0, c1 = canonicalize(mu0), canonicalize(mu1)
    if t == 0.0:
        return c0
    if t == 1.0:
        return c1
    _, plan = mixture_distance(c0, c1)
    components = [(weight, atomic.geodesic(c0.atoms[j], c1.atoms[k], t)) for (j, k), weight in plan.entries]
    return canonicalize(Mixture.from_components(components))


def mixture_barycenter_multi(mus: Sequence[Mixture], weights) -> Mixture:
    """Barycenter of ``Q`` mixtures through the multi-marginal weight problem."""
    weights = check_simplex(weights)
    if len(mus) != weights.shape[0]:
        raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(mus)} mixtures')
    _check_family(list(mus))
    canon = [canonicalize(mu) for mu in mus]
    shape = tuple(mu.size for mu in canon)
    size = int(np.prod(shape, dtype=np.int64))
    if size > MULTIMARGINAL_CAPACITY:
        raise CapacityError('multimarginal_capacity', f'{size} atom tuples exceed the limit {MULTIMARGINAL_CAPACITY}')

    indices = list(np.ndindex(*shape))

    def evaluate(index: Tuple[int, ...]):
        return atomic.barycentric_cost(weights, [mu.atoms[k] for mu, k in zip(canon, index)])

    results = parallel_map(evaluate, indices)
    cost = np.array([value for value, _ in results]).reshape(shape)
    bars: Dict[Tuple[int, ...], object] = {index: bar for index, (_, bar) in zip(indices, results)}

    plan = solve_multimarginal([mu.weights for mu in canon], cost)
    logger.debug('multi-marginal barycenter over shape %s uses %d components', shape, plan.nonzeros)
    return canonicalize(Mixture.from_components((weight, bars[index]) for index, weight in plan.entries))


def mixture_pdf(mu: Mixture, points) -> np.ndarray:
    """Vectorized mixture density on points of shape ``(N, d)``."""
    total = None
    for weight, atom in mu.components():
        values = weight * atomic.pdf(atom, points)
        total = values if total is None else total + values
    return total


def mixture_density(mu: Mixture, x) -> float:
    """Mixture density at a single point ``x`` of length d."""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.ndim != 1 or point.shape[0] != mu.dim:
        raise InvalidInputError('dimension_mismatch', f'point of length {point.size} for a {mu.dim}-dimensional mixture')
    return float(mixture_pdf(mu, point.reshape(1, -1))[0])


def mixture_path_length(mu0: Mixture, mu1: Mixture, steps: int) -> float:
    """Length of the barycenter path over the uniform partition with ``steps`` pieces."""
    steps = int(steps)
    if steps < 1:
        raise InvalidInputError('invalid_steps', 'steps must be a positive integer')
    path = [mixture_barycenter_pair(mu0, mu1, i / steps) for i in range(steps + 1)]
    return float(sum(mixture_distance(a, b)[0] for a, b in zip(path[:-1], path[1:])))


__all__ = [
    'atom_distance_matrix',
    'mixture_barycenter_multi',
    'mixture_barycenter_pair',
    'mixture_density',
    'mixture_distance',
    'mixture_path_length',
    'mixture_pdf',
]
