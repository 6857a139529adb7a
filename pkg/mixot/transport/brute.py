"""Vertex enumeration of small transportation polytopes, used as an independent check."""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..constants import BRUTE_FORCE_MAX_SIZE, PLAN_ZERO_TOL
from ..errors import CapacityError, InvalidInputError
from ..spd import check_simplex
from .models import DiscretePlan
from .network import check_cost

SINGULAR_TOL = 1e-9


def brute_force_transport(lambda0, lambda1, cost) -> DiscretePlan:
    """Best vertex among all basic feasible solutions of the transportation LP.

    Every basis is a spanning tree on ``J + K - 1`` cells; each candidate
    support is solved exactly and kept when nonnegative.
    """
    a = check_simplex(lambda0, 'lambda0')
    b = check_simplex(lambda1, 'lambda1')
    rows, cols = a.shape[0], b.shape[0]
    if rows > BRUTE_FORCE_MAX_SIZE or cols > BRUTE_FORCE_MAX_SIZE:
        raise CapacityError('brute_force_capacity', f'vertex enumeration is limited to {BRUTE_FORCE_MAX_SIZE}x{BRUTE_FORCE_MAX_SIZE}')
    matrix = check_cost(cost, (rows, cols))

    # Zeilensummen komplett, Spaltensummen ohne die letzte (die ist sonst linear abhängig)
    size = rows + cols - 1
    system = np.zeros((size, rows * cols))
    for j in range(rows):
        for k in range(cols):
            system[j, j * cols + k] = 1.0
            if k < cols - 1:
                system[rows + k, j * cols + k] = 1.0
    rhs = np.concatenate([a, b[:-1]])
    flat_cost = matrix.ravel()

    best_value = math.inf
    best_plan = None
    for support in itertools.combinations(range(rows * cols), size):
        block = system[:, support]
        if abs(np.linalg.det(block)) < SINGULAR_TOL:
            continue
        values = np.linalg.solve(block, rhs)
        if np.any(values < -PLAN_ZERO_TOL):
            continue
        values = np.clip(values, 0.0, None)
        candidate = float(flat_cost[list(support)] @ values)
        if candidate < best_value:
            best_value = candidate
            best_plan = np.zeros(rows * cols)
            best_plan[list(support)] = values

    if best_plan is None:
        raise InvalidInputError('infeasible', 'no feasible vertex found')
    return DiscretePlan.from_dense(best_plan.reshape(rows, cols), best_value)


__all__ = ['brute_force_transport']
