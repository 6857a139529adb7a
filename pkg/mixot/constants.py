"""Numeric defaults for mixot."""

from __future__ import annotations

# SPD kernel
SYMMETRY_RTOL = 1e-12
EIGEN_CLAMP = 1e-14
W2_NEGATIVE_ATOL = 1e-10
FIXED_POINT_RTOL = 1e-8
FIXED_POINT_POLISH_RTOL = 1e-14
FIXED_POINT_MAX_ITER = 200

# atoms
QUAD_EPSREL = 1e-10
TAIL_RADIUS_MAX = 1e4
H_CONDITION_TOL = 1e-8

# discrete transport
SIMPLEX_ATOL = 1e-9
PLAN_ZERO_TOL = 1e-14
MULTIMARGINAL_CAPACITY = 10**6
BRUTE_FORCE_MAX_SIZE = 4
LP_FEASIBILITY_TOL = 1e-10

# mixtures
ATOM_MERGE_ATOL = 1e-12

# symmetry
SYM_CAPACITY = 10**6
SO2_SCAN_POINTS = 360
SO2_ANGLE_TOL = 1e-8
SO2_DENSITY_ANGLES = 720
SD_QUAD_EPSREL = 1e-8

# grid oracle
DEFAULT_EPS_REL = 1e-4
DEFAULT_POINTS_1D = 200
DEFAULT_POINTS_2D = 50
AUTO_BOUNDS_SIGMAS = 5.0
AUTO_BOUNDS_TAIL_MOMENT = 1e-3
SINKHORN_MAX_ITER = 10_000
SINKHORN_STOP_L1 = 1e-8
SINKHORN_CHECK_EVERY = 10
SINKHORN_SCALING_FACTOR = 2.0
SINKHORN_SCALING_START = 0.1
SINKHORN_STAGE_ITER = 20
PLAN_CHUNK_ENTRIES = 1_000_000
DENSE_COST_ENTRIES = 2500 * 2500

# cli
DEFAULT_T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
ORACLE_RELATIVE_SLACK = 0.02

__all__ = [
    'ATOM_MERGE_ATOL',
    'AUTO_BOUNDS_SIGMAS',
    'AUTO_BOUNDS_TAIL_MOMENT',
    'BRUTE_FORCE_MAX_SIZE',
    'DEFAULT_EPS_REL',
    'DEFAULT_POINTS_1D',
    'DEFAULT_POINTS_2D',
    'DEFAULT_T_GRID',
    'DENSE_COST_ENTRIES',
    'EIGEN_CLAMP',
    'FIXED_POINT_MAX_ITER',
    'FIXED_POINT_POLISH_RTOL',
    'FIXED_POINT_RTOL',
    'H_CONDITION_TOL',
    'LP_FEASIBILITY_TOL',
    'MULTIMARGINAL_CAPACITY',
    'ORACLE_RELATIVE_SLACK',
    'PLAN_CHUNK_ENTRIES',
    'PLAN_ZERO_TOL',
    'QUAD_EPSREL',
    'SD_QUAD_EPSREL',
    'SIMPLEX_ATOL',
    'SINKHORN_CHECK_EVERY',
    'SINKHORN_MAX_ITER',
    'SINKHORN_SCALING_FACTOR',
    'SINKHORN_SCALING_START',
    'SINKHORN_STAGE_ITER',
    'SINKHORN_STOP_L1',
    'SO2_ANGLE_TOL',
    'SO2_DENSITY_ANGLES',
    'SO2_SCAN_POINTS',
    'SYMMETRY_RTOL',
    'SYM_CAPACITY',
    'TAIL_RADIUS_MAX',
    'W2_NEGATIVE_ATOL',
]
