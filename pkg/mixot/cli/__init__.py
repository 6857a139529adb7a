"""Command-line surface of mixot."""

from .commands import cli, exit_code_for, main
from .schema import MixtureSpec, dump_spec, load_spec, parse_spec, spec_from_dict

__all__ = ['MixtureSpec', 'cli', 'dump_spec', 'exit_code_for', 'load_spec', 'main', 'parse_spec', 'spec_from_dict']
