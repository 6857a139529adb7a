"""Exact two-marginal transport through POT's network simplex."""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
import ot

from ..errors import ConvergenceError, InvalidInputError
from ..spd import check_simplex
from .models import DiscretePlan

logger = logging.getLogger(__name__)

EMD_MAX_ITER = 1_000_000


def check_cost(cost, shape: Tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(cost, dtype=float)
    if arr.shape != tuple(shape):
        raise InvalidInputError('shape_mismatch', f'cost has shape {arr.shape}, expected {tuple(shape)}')
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError('non_finite', 'cost contains non-finite entries')
    if np.any(arr < 0.0):
        raise InvalidInputError('negative_cost', 'cost entries must be nonnegative')
    return arr


def solve_transport(lambda0, lambda1, cost) -> DiscretePlan:
    """Exact optimum of the transportation LP between two weight vectors.

    The plan is a basic solution with at most ``J + K - 1`` nonzeros; the
    potentials satisfy complementary slackness on its support.
    """
    a = check_simplex(lambda0, 'lambda0')
    b = check_simplex(lambda1, 'lambda1')
    matrix = check_cost(cost, (a.shape[0], b.shape[0]))

    dense, log = ot.emd(a, b, matrix, numItermax=EMD_MAX_ITER, log=True)
    if log.get('result_code', 1) != 1:
        raise ConvergenceError('network_simplex_failed', log.get('warning') or 'network simplex did not reach an optimum')
    dense = np.clip(np.asarray(dense, dtype=float), 0.0, None)
    value = float(np.sum(dense * matrix))
    potentials = (np.asarray(log['u'], dtype=float), np.asarray(log['v'], dtype=float))
    logger.debug('network simplex %dx%d value %.6e', a.shape[0], b.shape[0], value)
    return DiscretePlan.from_dense(dense, value, potentials)


def compose_plans(plan01: DiscretePlan, plan12: DiscretePlan, lambda1) -> np.ndarray:
    """Dense coupling ``w02[j, l] = sum_k w01[j, k] w12[k, l] / lambda1[k]``."""
    middle = np.asarray(lambda1, dtype=float)
    if plan01.shape[1] != middle.shape[0] or plan12.shape[0] != middle.shape[0]:
        raise InvalidInputError('shape_mismatch', 'plans do not share their middle marginal')
    w01 = plan01.to_dense()
    w12 = plan12.to_dense()
    scaled = np.divide(w01, middle[None, :], out=np.zeros_like(w01), where=middle[None, :] > 0.0)
    return scaled @ w12


__all__ = ['check_cost', 'compose_plans', 'solve_transport']
