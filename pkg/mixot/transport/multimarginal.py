"""Exact multi-marginal transport as a dense linear program (HiGHS dual simplex)."""

from __future__ import annotations

import logging
from typing import List, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..constants import LP_FEASIBILITY_TOL, MULTIMARGINAL_CAPACITY, PLAN_ZERO_TOL
from ..errors import CapacityError, ConvergenceError, InvalidInputError
from ..spd import check_simplex
from .models import DiscretePlan
from .network import check_cost

logger = logging.getLogger(__name__)


def _marginal_constraints(shape: Sequence[int]) -> sparse.csr_matrix:
    """Equality rows: every row of marginal 0, all but the last row of the others.

    Dropping one row per extra marginal leaves a full-row-rank system with
    ``sum(K) - Q + 1`` rows.
    """
    size = int(np.prod(shape))
    coords = np.unravel_index(np.arange(size), shape)
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    offset = 0
    for axis, count in enumerate(shape):
        kept = count if axis == 0 else count - 1
        mask = coords[axis] < kept
        rows.append(offset + coords[axis][mask])
        cols.append(np.flatnonzero(mask))
        offset += kept
    data = np.ones(sum(len(r) for r in rows))
    return sparse.csr_matrix((data, (np.concatenate(rows), np.concatenate(cols))), shape=(offset, size))


def _rhs(weights: Sequence[np.ndarray]) -> np.ndarray:
    parts = [weights[0]] + [w[:-1] for w in weights[1:]]
    return np.concatenate(parts)


def _polish(matrix: sparse.csr_matrix, rhs: np.ndarray, solution: np.ndarray) -> np.ndarray:
    # Basislösung auf dem Träger exakt nachrechnen
    support = np.flatnonzero(solution > PLAN_ZERO_TOL)
    if support.size == 0:
        return solution
    block = matrix[:, support].toarray()
    refined, *_ = np.linalg.lstsq(block, rhs, rcond=None)
    if np.any(refined < -PLAN_ZERO_TOL):
        return solution
    polished = np.zeros_like(solution)
    polished[support] = np.clip(refined, 0.0, None)
    return polished


def _duals(result, shape: Sequence[int]) -> tuple:
    marginals = getattr(getattr(result, 'eqlin', None), 'marginals', None)
    if marginals is None:
        return None
    duals = []
    offset = 0
    for axis, count in enumerate(shape):
        kept = count if axis == 0 else count - 1
        vector = np.zeros(count)
        vector[:kept] = marginals[offset:offset + kept]
        duals.append(vector)
        offset += kept
    return tuple(duals)


def solve_multimarginal(lambdas: Sequence, cost) -> DiscretePlan:
    """Exact optimum of the multi-marginal transport LP.

    The returned plan is a basic solution, so it carries at most
    ``sum(K_q) - Q + 1`` nonzeros.
    """
    if not lambdas:
        raise InvalidInputError('empty_input', 'at least one marginal is required')
    weights = [check_simplex(lam, f'lambdas[{idx}]') for idx, lam in enumerate(lambdas)]
    shape = tuple(w.shape[0] for w in weights)
    size = int(np.prod(shape, dtype=np.int64))
    if size > MULTIMARGINAL_CAPACITY:
        raise CapacityError(
            'multimarginal_capacity',
            f'the dense multi-marginal LP has {size} variables (limit {MULTIMARGINAL_CAPACITY}); '
            'decompose the problem pairwise',
        )
    tensor = check_cost(cost, shape)

    if len(shape) == 1:
        return DiscretePlan.from_dense(weights[0], float(weights[0] @ tensor), (np.array(tensor, dtype=float),))

    matrix = _marginal_constraints(shape)
    rhs = _rhs(weights)
    result = linprog(
        c=tensor.ravel(),
        A_eq=matrix,
        b_eq=rhs,
        bounds=(0.0, None),
        method='highs-ds',
        options={
            'primal_feasibility_tolerance': LP_FEASIBILITY_TOL,
            'dual_feasibility_tolerance': LP_FEASIBILITY_TOL,
        },
    )
    if result.status != 0 or result.x is None:
        raise ConvergenceError('multimarginal_failed', f'HiGHS stopped with status {result.status}: {result.message}')

    solution = _polish(matrix, rhs, np.clip(result.x, 0.0, None))
    value = float(tensor.ravel() @ solution)
    logger.debug('multi-marginal LP shape %s value %.6e nonzeros %d', shape, value, int(np.count_nonzero(solution)))
    return DiscretePlan.from_dense(solution.reshape(shape), value, _duals(result, shape))


__all__ = ['solve_multimarginal']
