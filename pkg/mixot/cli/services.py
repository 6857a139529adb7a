"""Orchestration behind the CLI commands; every function returns a JSON-ready report."""

from __future__ import annotations

import json
import logging
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..constants import DEFAULT_EPS_REL, DEFAULT_T_GRID, ORACLE_RELATIVE_SLACK
from ..errors import InvalidInputError, SchemaError
from ..grid import GridSpec, auto_spec, rasterize_mixture, sinkhorn_barycenter_result, sinkhorn_w2_squared
from ..mixtures import mixture_barycenter_multi, mixture_barycenter_pair, mixture_distance
from .exporters import build_path_xlsx, write_grid_csv
from .schema import MixtureSpec, dump_spec, ensure_compatible

logger = logging.getLogger(__name__)

Bounds = Tuple[Tuple[float, float], ...]


def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _floats(raw: str, option: str) -> List[float]:
    try:
        values = [float(part) for part in raw.split(',') if part.strip()]
    except ValueError:
        raise InvalidInputError('invalid_arguments', f'{option} expects comma-separated numbers, got {raw!r}')
    if not values or not all(math.isfinite(value) for value in values):
        raise InvalidInputError('invalid_arguments', f'{option} expects finite numbers, got {raw!r}')
    return values


def parse_points(raw: Optional[str]) -> Optional[Tuple[int, ...]]:
    """``"200"`` or ``"50,50"``; ``None`` keeps the per-dimension default."""
    if raw is None:
        return None
    values = _floats(raw, '--grid')
    if any(value != int(value) for value in values):
        raise InvalidInputError('invalid_arguments', f'--grid expects integers, got {raw!r}')
    return tuple(int(value) for value in values)


def parse_bounds(raw: Optional[str]) -> Optional[Bounds]:
    """``"auto"`` or ``"lo,hi[,lo,hi]"``."""
    if raw is None or raw.strip().lower() == 'auto':
        return None
    values = _floats(raw, '--bounds')
    if len(values) % 2:
        raise InvalidInputError('invalid_arguments', '--bounds expects pairs lo,hi per axis')
    return tuple((values[idx], values[idx + 1]) for idx in range(0, len(values), 2))


def parse_weights(raw: Optional[str]) -> Optional[List[float]]:
    return None if raw is None else _floats(raw, '--weights')


def load_atom_distances(path: Optional[str]) -> Optional[np.ndarray]:
    """Atom distance matrix from a JSON list of rows."""
    if path is None:
        return None
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as exc:
        raise SchemaError('unreadable_spec', f'{path}: {exc.strerror or exc}')
    except json.JSONDecodeError as exc:
        raise SchemaError('invalid_json', exc.msg, field='atom_distances', line=exc.lineno)
    try:
        matrix = np.asarray(document, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError('invalid_matrix', 'expected a list of numeric rows', field='atom_distances')
    if matrix.ndim != 2:
        raise SchemaError('invalid_matrix', 'expected a list of numeric rows', field='atom_distances')
    return matrix


def _resolve_points(points: Optional[Tuple[int, ...]]):
    if points is None:
        return None
    return points[0] if len(points) == 1 else points


def shared_grid(specs: Sequence[MixtureSpec], points=None, bounds: Optional[Bounds] = None) -> GridSpec:
    return auto_spec([spec.density_source() for spec in specs], _resolve_points(points), bounds)


def run_distance(
    spec_a: MixtureSpec,
    spec_b: MixtureSpec,
    p: float = 2.0,
    *,
    atom_distances: Optional[np.ndarray] = None,
    timing: bool = True,
) -> Dict:
    ensure_compatible([spec_a, spec_b])
    start = time.perf_counter()
    value, plan = mixture_distance(spec_a.mixture, spec_b.mixture, p, atom_distances=atom_distances)
    elapsed = _elapsed_ms(start)
    logger.info('Mixture distance %.6g computed in %.3f ms', value, elapsed)
    report = {'value': value, 'plan': plan.to_dict()['entries']}
    if timing:
        report['wall_time_ms'] = elapsed
    return report


def _label(value: float) -> str:
    return f'{value:g}'


def run_barycenter(
    specs: Sequence[MixtureSpec],
    out_dir: Path,
    *,
    ts: Optional[Sequence[float]] = None,
    weights: Optional[Sequence[float]] = None,
    rasterize: bool = False,
    oracle: bool = False,
    points=None,
    bounds: Optional[Bounds] = None,
    eps_rel: float = DEFAULT_EPS_REL,
    xlsx: bool = False,
) -> Dict:
    """Write barycenter specs (and optional grids) into ``out_dir``."""
    specs = list(specs)
    ensure_compatible(specs)
    if weights is not None:
        if ts:
            raise InvalidInputError('invalid_arguments', '--t and --weights are mutually exclusive')
        bary = mixture_barycenter_multi([spec.mixture for spec in specs], weights)
        outputs = [('w' + '_'.join(_label(w) for w in weights), list(weights), bary)]
    else:
        if len(specs) != 2:
            raise InvalidInputError('invalid_arguments', 'a barycenter path needs exactly two specs; use --weights for more')
        times = list(ts) if ts else list(DEFAULT_T_GRID)
        outputs = [
            (f't{_label(t)}', [1.0 - t, t], mixture_barycenter_pair(specs[0].mixture, specs[1].mixture, t))
            for t in times
        ]

    out_dir.mkdir(parents=True, exist_ok=True)
    grid = shared_grid(specs, points, bounds) if (rasterize or oracle) else None
    inputs = [rasterize_mixture(spec.density_source(), grid) for spec in specs] if oracle else None

    files: List[str] = []
    path_specs: List[Tuple[str, MixtureSpec]] = []
    oracle_runs = []
    for label, bary_weights, bary in outputs:
        result_spec = specs[0].with_mixture(bary)
        path_specs.append((label, result_spec))
        json_path = out_dir / f'bary_{label}.json'
        json_path.write_text(dump_spec(result_spec), encoding='utf-8')
        files.append(json_path.name)
        if rasterize:
            density = rasterize_mixture(result_spec.density_source(), grid)
            files.append(write_grid_csv(density, out_dir / f'bary_{label}.csv').name)
        if oracle:
            result = sinkhorn_barycenter_result(inputs, bary_weights, eps_rel)
            files.append(write_grid_csv(result.density, out_dir / f'bary_{label}_w2.csv').name)
            oracle_runs.append({'label': label, 'converged': result.converged, 'iterations': result.iterations})

    if xlsx:
        summary = [('Inputs', ', '.join(spec.source or '-' for spec in specs)), ('Outputs', len(outputs))]
        if grid is not None:
            summary.append(('Grid', json.dumps(grid.to_dict())))
        workbook = out_dir / 'barycenters.xlsx'
        workbook.write_bytes(build_path_xlsx(path_specs, summary))
        files.append(workbook.name)

    logger.info('Wrote %d barycenter files to %s', len(files), out_dir)
    report: Dict = {'out': str(out_dir), 'files': files}
    if grid is not None:
        report['grid'] = grid.to_dict()
    if oracle_runs:
        report['oracle'] = oracle_runs
    return report


def run_compare(
    spec_a: MixtureSpec,
    spec_b: MixtureSpec,
    *,
    eps_rel: float = DEFAULT_EPS_REL,
    points=None,
    bounds: Optional[Bounds] = None,
) -> Dict:
    """Closed-form mixture distance next to the grid Sinkhorn value on the same inputs."""
    ensure_compatible([spec_a, spec_b])
    start = time.perf_counter()
    value, _ = mixture_distance(spec_a.mixture, spec_b.mixture)
    mixture_ms = _elapsed_ms(start)

    grid = shared_grid([spec_a, spec_b], points, bounds)
    start = time.perf_counter()
    p = rasterize_mixture(spec_a.density_source(), grid)
    q = rasterize_mixture(spec_b.density_source(), grid)
    result = sinkhorn_w2_squared(p, q, eps_rel)
    oracle_ms = _elapsed_ms(start)

    oracle_value = math.sqrt(max(result.value, 0.0))
    gap = value - oracle_value
    bound = value * value * (1.0 + ORACLE_RELATIVE_SLACK) + result.eps * math.log(grid.size)
    # das Sandwich gilt nur, wenn Rasterdichte und Mischung dasselbe Mass beschreiben
    checked = not spec_a.is_slater
    logger.info('Compare: mixture %.6g (%.3f ms), sinkhorn %.6g (%.1f ms)', value, mixture_ms, oracle_value, oracle_ms)
    return {
        'mixture_value': value,
        'oracle_value': oracle_value,
        'gap': gap,
        'relative_gap': gap / value if value > 0.0 else gap,
        'mixture_wall_time_ms': mixture_ms,
        'oracle_wall_time_ms': oracle_ms,
        'oracle': result.to_dict(),
        'grid': grid.to_dict(),
        'sandwich': {
            'checked': checked,
            'ok': (result.value <= bound) if checked else None,
            'oracle_w2_squared': result.value,
            'bound': bound,
        },
    }


__all__ = [
    'load_atom_distances',
    'parse_bounds',
    'parse_points',
    'parse_weights',
    'run_barycenter',
    'run_compare',
    'run_distance',
    'shared_grid',
]
