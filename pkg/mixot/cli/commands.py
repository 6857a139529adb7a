"""Click command group; commands parse options, call services and print JSON."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional, Sequence

import click

from ..config import configure_logging, load_settings
from ..errors import (
    ConvergenceError,
    FamilyMismatchError,
    MixotError,
    OracleViolationError,
    SchemaError,
    ValidationFailedError,
)
from ..workers import configure_threads
from . import services
from .schema import load_spec
from .suites import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_COMPATIBILITY = 3
EXIT_CONVERGENCE = 4
EXIT_ORACLE = 5

EXIT_CODES = (
    (ValidationFailedError, EXIT_VALIDATION),
    (SchemaError, EXIT_INPUT),
    (FamilyMismatchError, EXIT_COMPATIBILITY),
    (ConvergenceError, EXIT_CONVERGENCE),
    (OracleViolationError, EXIT_ORACLE),
)
COMPATIBILITY_CODES = {'group_mismatch', 'block_shape_mismatch'}


def exit_code_for(error: MixotError) -> int:
    if error.code in COMPATIBILITY_CODES:
        return EXIT_COMPATIBILITY
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_INPUT


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


def _fail(error: MixotError) -> None:
    click.echo(json.dumps(error.to_dict()), err=True)
    raise click.exceptions.Exit(exit_code_for(error))


def _eps_rel(ctx: click.Context, value: Optional[float]) -> float:
    return value if value is not None else ctx.obj.eps_rel


@click.group()
@click.option('--log-level', default=None, help='Overrides MIXOT_LOG_LEVEL.')
@click.option('--env-file', type=click.Path(dir_okay=False), default=None, help='Optional .env file.')
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], env_file: Optional[str]) -> None:
    """Mixture Wasserstein distances, barycenters and grid reference checks."""
    try:
        settings = load_settings(env_file)
    except MixotError as err:
        _fail(err)
    configure_logging((log_level or settings.log_level).upper())
    configure_threads(settings)
    ctx.obj = settings


@cli.command()
@click.argument('spec_a', type=click.Path(dir_okay=False))
@click.argument('spec_b', type=click.Path(dir_okay=False))
@click.option('--p', 'order', type=float, default=2.0, show_default=True, help='Order of the mixture distance.')
@click.option('--atom-distances', type=click.Path(dir_okay=False), default=None,
              help='JSON matrix of atom distances over the canonical components.')
@click.option('--no-timing', is_flag=True, help='Omit wall_time_ms for reproducible output.')
def distance(spec_a: str, spec_b: str, order: float, atom_distances: Optional[str], no_timing: bool) -> None:
    """Mixture distance between two specs and the optimal weight plan."""
    try:
        report = services.run_distance(
            load_spec(spec_a),
            load_spec(spec_b),
            order,
            atom_distances=services.load_atom_distances(atom_distances),
            timing=not no_timing,
        )
    except MixotError as err:
        _fail(err)
    _emit(report)


@cli.command()
@click.argument('specs', nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option('--t', 'ts', type=float, multiple=True, help='Geodesic times (default 0, .25, .5, .75, 1).')
@click.option('--weights', default=None, help='Comma-separated barycentric weights, one per spec.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default='.', show_default=True)
@click.option('--rasterize', is_flag=True, help='Also write grid CSVs.')
@click.option('--oracle', is_flag=True, help='Also write the grid Sinkhorn barycenter CSVs.')
@click.option('--grid', 'points', default=None, help='Points per axis, e.g. 200 or 50,50.')
@click.option('--bounds', default='auto', show_default=True, help='auto or lo,hi[,lo,hi].')
@click.option('--eps-rel', type=float, default=None, help='Sinkhorn regularization relative to diam^2.')
@click.option('--xlsx', is_flag=True, help='Also write barycenters.xlsx.')
@click.pass_context
def barycenter(
    ctx: click.Context,
    specs: Sequence[str],
    ts: Sequence[float],
    weights: Optional[str],
    out_dir: str,
    rasterize: bool,
    oracle: bool,
    points: Optional[str],
    bounds: str,
    eps_rel: Optional[float],
    xlsx: bool,
) -> None:
    """Barycenters along the geodesic of two specs, or of several specs with --weights."""
    try:
        report = services.run_barycenter(
            [load_spec(path) for path in specs],
            Path(out_dir),
            ts=list(ts),
            weights=services.parse_weights(weights),
            rasterize=rasterize,
            oracle=oracle,
            points=services.parse_points(points),
            bounds=services.parse_bounds(bounds),
            eps_rel=_eps_rel(ctx, eps_rel),
            xlsx=xlsx,
        )
    except MixotError as err:
        _fail(err)
    _emit(report)


@cli.command()
@click.argument('spec_a', type=click.Path(dir_okay=False))
@click.argument('spec_b', type=click.Path(dir_okay=False))
@click.option('--grid', 'points', default=None, help='Points per axis, e.g. 200 or 50,50.')
@click.option('--bounds', default='auto', show_default=True, help='auto or lo,hi[,lo,hi].')
@click.option('--eps-rel', type=float, default=None, help='Sinkhorn regularization relative to diam^2.')
@click.option('--no-assert', is_flag=True, help='Report the oracle sandwich without enforcing it.')
@click.pass_context
def compare(
    ctx: click.Context,
    spec_a: str,
    spec_b: str,
    points: Optional[str],
    bounds: str,
    eps_rel: Optional[float],
    no_assert: bool,
) -> None:
    """Closed-form mixture distance against the grid Sinkhorn oracle."""
    try:
        report = services.run_compare(
            load_spec(spec_a),
            load_spec(spec_b),
            eps_rel=_eps_rel(ctx, eps_rel),
            points=services.parse_points(points),
            bounds=services.parse_bounds(bounds),
        )
    except MixotError as err:
        _fail(err)
    _emit(report)
    if not no_assert and report['sandwich']['ok'] is False:
        _fail(OracleViolationError(
            'oracle_sandwich_violated',
            f"grid W2^2 {report['sandwich']['oracle_w2_squared']:.6g} exceeds bound {report['sandwich']['bound']:.6g}",
        ))


@cli.command()
@click.option('--suite', type=click.Choice(SUITE_NAMES), default='all', show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--trials', type=click.IntRange(min=1), default=None, help='Overrides the per-suite trial count.')
def validate(suite: str, seed: int, trials: Optional[int]) -> None:
    """Run invariant suites; exit 1 if any check fails."""
    try:
        report = run_suite(suite, seed, trials)
    except MixotError as err:
        _fail(err)
    _emit(report)
    if not report['ok']:
        failed = [check['name'] for check in report['checks'] if not check['passed']]
        _fail(ValidationFailedError('validation_failed', f"failed checks: {', '.join(failed)}"))


def main(argv: Optional[Sequence[str]] = None) -> None:
    cli.main(args=list(argv) if argv is not None else None, prog_name='mixot')


__all__ = ['EXIT_CODES', 'cli', 'exit_code_for', 'main']
