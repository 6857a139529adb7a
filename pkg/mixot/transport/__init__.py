"""Exact discrete transport solvers over mixture weights."""

from .brute import brute_force_transport
from .models import DiscretePlan
from .multimarginal import solve_multimarginal
from .network import check_cost, compose_plans, solve_transport

__all__ = [
    'DiscretePlan',
    'brute_force_transport',
    'check_cost',
    'compose_plans',
    'solve_multimarginal',
    'solve_transport',
]
