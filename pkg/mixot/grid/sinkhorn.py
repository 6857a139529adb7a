"""Entropic transport on grids through POT's log-domain Sinkhorn solvers.

Transport runs on the supports of the two densities. Small problems go
through ``ot.sinkhorn`` on a dense cost matrix with warm-started epsilon
stages; larger ones evaluate the cost lazily in batches with
``ot.bregman.empirical_sinkhorn``. Plan quantities are streamed in row blocks
from the returned log potentials, so no plan is kept in memory.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import ot

from ..constants import (
    DEFAULT_EPS_REL,
    DENSE_COST_ENTRIES,
    PLAN_CHUNK_ENTRIES,
    SINKHORN_CHECK_EVERY,
    SINKHORN_MAX_ITER,
    SINKHORN_SCALING_FACTOR,
    SINKHORN_SCALING_START,
    SINKHORN_STAGE_ITER,
    SINKHORN_STOP_L1,
)
from ..errors import InvalidInputError
from ..spd import check_simplex
from .models import GridDensity, GridSpec, ensure_same_spec

logger = logging.getLogger(__name__)

RegionPredicate = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SinkhornResult:
    """Converged (or capped) log potentials and the transport cost of their plan.

    ``log_u`` and ``log_v`` live on the full grid and are ``-inf`` off the
    supports.
    """

    value: float
    converged: bool
    iterations: int
    violation: float
    eps: float
    log_u: np.ndarray
    log_v: np.ndarray

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'converged': self.converged,
            'iterations': self.iterations,
            'violation': self.violation,
            'eps': self.eps,
        }


@dataclass(frozen=True)
class BarycenterResult:
    density: GridDensity
    converged: bool
    iterations: int
    violation: float
    eps: float


@dataclass(frozen=True)
class _Coupling:
    spec: GridSpec
    eps: float
    source: np.ndarray
    target: np.ndarray
    a: np.ndarray
    b: np.ndarray
    f: np.ndarray
    g: np.ndarray
    iterations: int


def absolute_eps(spec: GridSpec, eps_rel: float) -> float:
    """Regularization relative to the squared grid diameter."""
    eps_rel = float(eps_rel)
    if not eps_rel > 0.0 or not np.isfinite(eps_rel):
        raise InvalidInputError('invalid_eps', f'eps must be positive, got {eps_rel}')
    return eps_rel * spec.diameter_squared


def _support(density: GridDensity) -> Tuple[np.ndarray, np.ndarray]:
    flat = density.normalized().probabilities().ravel()
    index = np.flatnonzero(flat > 0.0)
    weights = flat[index]
    return index, weights / weights.sum()


def _scaling_schedule(eps: float, diameter_squared: float) -> List[float]:
    schedule = []
    current = SINKHORN_SCALING_START * diameter_squared
    while current > SINKHORN_SCALING_FACTOR * eps:
        schedule.append(current)
        current /= SINKHORN_SCALING_FACTOR
    return schedule


def _dense_potentials(xs, xt, a, b, eps, diameter_squared, max_iter, tol) -> Tuple[np.ndarray, np.ndarray, int]:
    cost = ot.dist(xs, xt)
    log_u, log_v = np.zeros(a.shape[0]), np.zeros(b.shape[0])
    # POT misst die Spaltenverletzung in der L2-Norm
    stop = tol / math.sqrt(b.shape[0])
    previous = None
    iterations = 0
    for stage_eps in _scaling_schedule(eps, diameter_squared) + [eps]:
        if previous is not None:
            log_u, log_v = log_u * (previous / stage_eps), log_v * (previous / stage_eps)
        previous = stage_eps
        limit = max_iter if stage_eps == eps else SINKHORN_STAGE_ITER
        _, log = ot.sinkhorn(
            a, b, cost, stage_eps,
            method='sinkhorn_log',
            numItermax=limit,
            stopThr=stop,
            log=True,
            warn=False,
            warmstart=(log_u, log_v),
        )
        log_u, log_v = np.asarray(log['log_u']), np.asarray(log['log_v'])
        iterations = int(log['niter']) + 1
        logger.debug('sinkhorn stage eps=%.3e done after %d iterations', stage_eps, iterations)
    return log_u, log_v, iterations


def _lazy_potentials(xs, xt, a, b, eps, max_iter, tol) -> Tuple[np.ndarray, np.ndarray, int]:
    batch = max(1, PLAN_CHUNK_ENTRIES // max(xs.shape[0], xt.shape[0]))
    f, g, log = ot.bregman.empirical_sinkhorn(
        xs, xt, eps,
        a=a,
        b=b,
        metric='sqeuclidean',
        numIterMax=max_iter,
        stopThr=tol,
        isLazy=True,
        batchSize=batch,
        log=True,
        warn=False,
    )
    errors = log['err']
    finished = bool(errors) and float(errors[-1]) <= tol
    iterations = SINKHORN_CHECK_EVERY * len(errors) if finished else max_iter
    return np.asarray(f), np.asarray(g), iterations


def _couple(p: GridDensity, q: GridDensity, eps_rel: float, max_iter: int, tol: float) -> _Coupling:
    spec = ensure_same_spec([p, q])
    eps = absolute_eps(spec, eps_rel)
    nodes = spec.nodes()
    source, a = _support(p)
    target, b = _support(q)
    xs, xt = nodes[source], nodes[target]
    if source.size * target.size <= DENSE_COST_ENTRIES:
        f, g, iterations = _dense_potentials(xs, xt, a, b, eps, spec.diameter_squared, max_iter, tol)
    else:
        logger.debug('Lazy Sinkhorn on %d x %d support nodes', source.size, target.size)
        f, g, iterations = _lazy_potentials(xs, xt, a, b, eps, max_iter, tol)
    return _Coupling(spec, eps, source, target, a, b, f, g, iterations)


def _plan_blocks(coupling: _Coupling) -> Iterator[Tuple[slice, np.ndarray, np.ndarray]]:
    """Yield ``(rows, plan block, cost block)`` over row chunks of the implicit plan."""
    nodes = coupling.spec.nodes()
    xt = nodes[coupling.target]
    size = coupling.source.size
    chunk = max(1, PLAN_CHUNK_ENTRIES // coupling.target.size)
    for start in range(0, size, chunk):
        rows = slice(start, min(start + chunk, size))
        cost = ot.dist(nodes[coupling.source[rows]], xt)
        plan = np.exp(coupling.f[rows, None] + coupling.g[None, :] - cost / coupling.eps)
        yield rows, plan, cost


def _on_grid(spec: GridSpec, index: np.ndarray, values: np.ndarray) -> np.ndarray:
    full = np.full(spec.size, -np.inf)
    full[index] = values
    return full.reshape(spec.shape)


def sinkhorn_w2_squared(
    p: GridDensity,
    q: GridDensity,
    eps_rel: float = DEFAULT_EPS_REL,
    *,
    max_iter: int = SINKHORN_MAX_ITER,
    tol: float = SINKHORN_STOP_L1,
) -> SinkhornResult:
    """Transport cost of the entropic plan between two grid densities.

    ``value`` is the unregularized objective of the regularized plan and
    ``violation`` the L1 error of both plan marginals. A run that hits
    ``max_iter`` is returned with ``converged=False``.
    """
    coupling = _couple(p, q, eps_rel, max_iter, tol)
    value = 0.0
    rows_mass = np.zeros(coupling.source.size)
    columns_mass = np.zeros(coupling.target.size)
    for rows, plan, cost in _plan_blocks(coupling):
        value += float((plan * cost).sum())
        rows_mass[rows] = plan.sum(axis=1)
        columns_mass += plan.sum(axis=0)
    violation = float(np.abs(rows_mass - coupling.a).sum() + np.abs(columns_mass - coupling.b).sum())
    converged = violation <= tol
    if not converged:
        logger.warning('Sinkhorn stopped after %d iterations with marginal violation %.3e', coupling.iterations, violation)
    return SinkhornResult(
        value,
        converged,
        coupling.iterations,
        violation,
        coupling.eps,
        _on_grid(coupling.spec, coupling.source, coupling.f),
        _on_grid(coupling.spec, coupling.target, coupling.g),
    )


def plan_region_mass(
    p: GridDensity,
    q: GridDensity,
    eps_rel: float = DEFAULT_EPS_REL,
    region: Optional[RegionPredicate] = None,
    *,
    max_iter: int = SINKHORN_MAX_ITER,
    tol: float = SINKHORN_STOP_L1,
) -> float:
    """Entropic plan mass on node pairs ``(x, y)`` with ``region(x, y)`` true.

    ``region`` receives source nodes of shape ``(c, 1, d)`` and target nodes
    of shape ``(1, N, d)`` and returns a broadcastable boolean mask; ``None``
    selects every pair.
    """
    coupling = _couple(p, q, eps_rel, max_iter, tol)
    nodes = coupling.spec.nodes()
    xt = nodes[coupling.target]
    total = 0.0
    for rows, plan, _ in _plan_blocks(coupling):
        if region is None:
            total += float(plan.sum())
            continue
        xs = nodes[coupling.source[rows]]
        mask = np.broadcast_to(np.asarray(region(xs[:, None, :], xt[None, :, :]), dtype=bool), plan.shape)
        total += float(plan[mask].sum())
    return total


def cross_region(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pairs whose first coordinates lie on opposite sides of zero."""
    return x[..., 0] * y[..., 0] < 0.0


def _square_axes(spec: GridSpec) -> Optional[float]:
    """Common axis length of a 2D grid with equally long axes, else ``None``."""
    if spec.dim != 2:
        return None
    (lo0, hi0), (lo1, hi1) = spec.bounds
    if not math.isclose(hi0 - lo0, hi1 - lo1, rel_tol=1e-12):
        return None
    return hi0 - lo0


def _bregman_barycenter(spec: GridSpec, inputs: Sequence[np.ndarray], weights: np.ndarray, eps: float, max_iter: int, tol: float):
    length = _square_axes(spec)
    if length is not None:
        # POT legt den Faltungskern auf [0, 1]^2, daher eps in Einheiten der Kantenlaenge
        values, log = ot.bregman.convolutional_barycenter2d(
            np.stack(inputs),
            eps / length**2,
            weights,
            method='sinkhorn_log',
            numItermax=max_iter,
            stopThr=tol,
            log=True,
            warn=False,
        )
    else:
        nodes = spec.nodes()
        values, log = ot.bregman.barycenter(
            np.stack([grid.ravel() for grid in inputs], axis=1),
            ot.dist(nodes, nodes),
            eps,
            weights,
            method='sinkhorn_log',
            numItermax=max_iter,
            stopThr=tol,
            log=True,
            warn=False,
        )
    errors = log['err']
    violation = float(errors[-1]) if errors else math.inf
    return np.asarray(values).reshape(spec.shape), int(log['niter']) + 1, violation


def sinkhorn_barycenter_result(
    densities: Sequence[GridDensity],
    weights,
    eps_rel: float = DEFAULT_EPS_REL,
    *,
    max_iter: int = SINKHORN_MAX_ITER,
    tol: float = SINKHORN_STOP_L1,
) -> BarycenterResult:
    """Entropic barycenter by iterated Bregman projections in the log domain.

    2D grids with equally long axes use POT's separable convolutional
    solver, everything else the dense one. ``violation`` is POT's spread of
    the per-input barycenter estimates.
    """
    weights = check_simplex(weights)
    if len(densities) != weights.shape[0]:
        raise InvalidInputError('length_mismatch', f'{weights.shape[0]} weights for {len(densities)} densities')
    spec = ensure_same_spec(list(densities))
    eps = absolute_eps(spec, eps_rel)

    active = [(w, d.normalized()) for w, d in zip(weights, densities) if w > 0.0]
    if all(np.array_equal(active[0][1].values, other.values) for _, other in active[1:]):
        # ein einzelnes Mass ist sein eigenes Baryzentrum
        return BarycenterResult(active[0][1], True, 0, 0.0, eps)

    active_weights = np.array([w for w, _ in active])
    inputs = [density.probabilities().reshape(spec.shape) for _, density in active]
    values, iterations, violation = _bregman_barycenter(
        spec, inputs, active_weights / active_weights.sum(), eps, max_iter, tol
    )
    converged = violation < tol
    if not converged:
        logger.warning('Sinkhorn barycenter stopped after %d iterations with violation %.3e', iterations, violation)
    density = GridDensity(spec, values / (values.sum() * spec.cell_volume))
    return BarycenterResult(density, converged, iterations, violation, eps)


def sinkhorn_barycenter(
    densities: Sequence[GridDensity],
    weights,
    eps_rel: float = DEFAULT_EPS_REL,
    *,
    max_iter: int = SINKHORN_MAX_ITER,
    tol: float = SINKHORN_STOP_L1,
) -> GridDensity:
    return sinkhorn_barycenter_result(densities, weights, eps_rel, max_iter=max_iter, tol=tol).density


__all__ = [
    'BarycenterResult',
    'SinkhornResult',
    'absolute_eps',
    'cross_region',
    'plan_region_mass',
    'sinkhorn_barycenter',
    'sinkhorn_barycenter_result',
    'sinkhorn_w2_squared',
]
