"""Grid reference computations: rasterization, log-domain Sinkhorn and invariance checks."""

from .checks import act_on_grid, symmetry_defect
from .models import GridDensity, GridSpec, ensure_same_spec
from .rasterize import auto_bounds, auto_spec, default_points, density_function, rasterize, rasterize_mixture
from .sinkhorn import (
    BarycenterResult,
    SinkhornResult,
    absolute_eps,
    cross_region,
    plan_region_mass,
    sinkhorn_barycenter,
    sinkhorn_barycenter_result,
    sinkhorn_w2_squared,
)

__all__ = [
    'BarycenterResult',
    'GridDensity',
    'GridSpec',
    'SinkhornResult',
    'absolute_eps',
    'act_on_grid',
    'auto_bounds',
    'auto_spec',
    'cross_region',
    'default_points',
    'density_function',
    'ensure_same_spec',
    'plan_region_mass',
    'rasterize',
    'rasterize_mixture',
    'sinkhorn_barycenter',
    'sinkhorn_barycenter_result',
    'sinkhorn_w2_squared',
]
