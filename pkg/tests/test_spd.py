import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixot.errors import ConvergenceError, InvalidInputError, SingularSourceError
from mixot.spd import (
    affine_ot_map,
    barycenter_covariance,
    check_simplex,
    check_spd,
    gaussian_w2_squared,
    sqrt_spd,
)

from conftest import random_spd

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=4)


def test_sqrt_of_identity_and_diagonal():
    assert np.allclose(sqrt_spd(np.eye(3)), np.eye(3), rtol=0.0, atol=1e-15)
    assert np.allclose(sqrt_spd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), rtol=0.0, atol=1e-14)


@settings(deadline=None, max_examples=40)
@given(seed=seeds, dim=dims)
def test_sqrt_squares_back(seed, dim):
    matrix = random_spd(np.random.default_rng(seed), dim)
    root = sqrt_spd(matrix)
    assert np.linalg.norm(root @ root - matrix) <= 1e-11 * np.linalg.norm(matrix)
    assert np.all(np.linalg.eigvalsh(root) > 0.0)


def test_check_spd_rejects_asymmetric_and_indefinite():
    with pytest.raises(InvalidInputError) as exc:
        check_spd([[1.0, 0.5], [0.0, 1.0]])
    assert exc.value.code == 'not_symmetric'
    with pytest.raises(InvalidInputError) as exc:
        check_spd([[1.0, 0.0], [0.0, -1.0]])
    assert exc.value.code == 'not_positive'
    with pytest.raises(InvalidInputError) as exc:
        check_spd(np.zeros((2, 2)))
    assert exc.value.code == 'not_positive_definite'
    assert np.array_equal(check_spd(np.zeros((2, 2)), degenerate=True), np.zeros((2, 2)))


def test_gaussian_w2_closed_values():
    assert gaussian_w2_squared([0.0], [[1.0]], [3.0], [[4.0]]) == pytest.approx(10.0, abs=1e-12)
    assert gaussian_w2_squared(np.zeros(2), np.eye(2), np.zeros(2), 4 * np.eye(2)) == pytest.approx(2.0, abs=1e-12)
    sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert gaussian_w2_squared([1.0, 2.0], sigma, [1.0, 2.0], sigma) == 0.0


def test_gaussian_w2_dimension_mismatch():
    with pytest.raises(InvalidInputError) as exc:
        gaussian_w2_squared([0.0], [[1.0]], [0.0, 0.0], np.eye(2))
    assert exc.value.code == 'dimension_mismatch'


@settings(deadline=None, max_examples=30)
@given(seed=seeds, dim=dims)
def test_gaussian_w2_symmetry_and_triangle(seed, dim):
    rng = np.random.default_rng(seed)
    params = [(rng.normal(size=dim), random_spd(rng, dim)) for _ in range(3)]
    (m0, s0), (m1, s1), (m2, s2) = params
    d01 = gaussian_w2_squared(m0, s0, m1, s1)
    assert d01 >= 0.0
    assert abs(d01 - gaussian_w2_squared(m1, s1, m0, s0)) <= 1e-10 * (1.0 + d01)
    d02 = math.sqrt(gaussian_w2_squared(m0, s0, m2, s2))
    d12 = math.sqrt(gaussian_w2_squared(m1, s1, m2, s2))
    assert d02 <= math.sqrt(d01) + d12 + 1e-9


def test_affine_map_examples():
    sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
    matrix, shift = affine_ot_map([0.0, 1.0], sigma, [2.0, -1.0], sigma)
    assert np.allclose(matrix, np.eye(2), atol=1e-12)
    assert np.allclose(shift, [2.0, -2.0], atol=1e-12)

    matrix, shift = affine_ot_map([0.0], [[1.0]], [0.0], [[4.0]])
    assert matrix[0, 0] == pytest.approx(2.0, abs=1e-12)
    assert shift[0] == pytest.approx(0.0, abs=1e-12)


def test_affine_map_pushes_moments(rng):
    m0, s0 = rng.normal(size=3), random_spd(rng, 3)
    m1, s1 = rng.normal(size=3), random_spd(rng, 3)
    matrix, shift = affine_ot_map(m0, s0, m1, s1)
    assert np.allclose(matrix @ m0 + shift, m1, rtol=1e-9, atol=1e-9)
    assert np.linalg.norm(matrix @ s0 @ matrix.T - s1) <= 1e-9 * np.linalg.norm(s1)


def test_affine_map_monte_carlo(rng):
    m0, s0 = np.array([1.0, -1.0]), np.array([[1.0, 0.4], [0.4, 0.8]])
    m1, s1 = np.array([0.0, 2.0]), np.array([[2.0, -0.5], [-0.5, 1.5]])
    matrix, shift = affine_ot_map(m0, s0, m1, s1)
    samples = rng.multivariate_normal(m0, s0, size=100_000)
    pushed = samples @ matrix.T + shift
    assert np.allclose(np.cov(pushed, rowvar=False), s1, rtol=0.05, atol=0.05)


def test_affine_map_singular_source():
    with pytest.raises(SingularSourceError) as exc:
        affine_ot_map([0.0, 0.0], np.diag([1.0, 0.0]), [0.0, 0.0], np.eye(2))
    assert exc.value.code == 'singular_source'


def test_check_simplex():
    assert np.allclose(check_simplex([0.25, 0.75]), [0.25, 0.75])
    with pytest.raises(InvalidInputError) as exc:
        check_simplex([0.5, 0.6])
    assert exc.value.code == 'weights_not_normalized'
    with pytest.raises(InvalidInputError) as exc:
        check_simplex([1.5, -0.5])
    assert exc.value.code == 'negative_weight'


def test_barycenter_covariance_closed_cases(rng):
    sigma = random_spd(rng, 3)
    assert np.allclose(barycenter_covariance([0.3, 0.7], [sigma, sigma]), sigma, rtol=1e-10, atol=1e-12)

    bar = barycenter_covariance([0.2, 0.5, 0.3], [[[1.0]], [[4.0]], [[9.0]]])
    assert bar[0, 0] == pytest.approx((0.2 * 1 + 0.5 * 2 + 0.3 * 3) ** 2, rel=1e-10)

    diagonals = [np.diag([1.0, 4.0]), np.diag([9.0, 1.0])]
    bar = barycenter_covariance([0.5, 0.5], diagonals)
    assert np.allclose(bar, np.diag([4.0, 2.25]), rtol=1e-10)


@settings(deadline=None, max_examples=20)
@given(seed=seeds, dim=st.integers(min_value=2, max_value=4))
def test_barycenter_covariance_residual(seed, dim):
    rng = np.random.default_rng(seed)
    covs = [random_spd(rng, dim) for _ in range(3)]
    weights = rng.dirichlet(np.ones(3))
    bar = barycenter_covariance(weights, covs)
    root = sqrt_spd(bar)
    image = sum(w * sqrt_spd(root @ cov @ root) for w, cov in zip(weights, covs))
    assert np.linalg.norm(bar - image) <= 1e-8 * np.linalg.norm(bar)


def test_barycenter_single_weight_returns_input(rng):
    sigma = random_spd(rng, 2)
    assert np.array_equal(barycenter_covariance([0.0, 1.0], [np.eye(2), sigma]), check_spd(sigma))


def test_barycenter_covariance_reports_non_convergence():
    covs = [np.diag([1.0, 100.0]), np.array([[50.0, 49.0], [49.0, 50.0]])]
    with pytest.raises(ConvergenceError) as exc:
        barycenter_covariance([0.5, 0.5], covs, rtol=1e-30, max_iter=2)
    assert exc.value.code == 'fixed_point_not_converged'
    assert exc.value.iterations == 2
    assert exc.value.residual is not None


def test_geodesic_covariance_constant_speed(rng):
    m0, s0 = rng.normal(size=2), random_spd(rng, 2)
    m1, s1 = rng.normal(size=2), random_spd(rng, 2)

    def point(t):
        return (1 - t) * m0 + t * m1, barycenter_covariance([1 - t, t], [s0, s1])

    total = math.sqrt(gaussian_w2_squared(m0, s0, m1, s1))
    (ms, ss), (mt, st_) = point(0.25), point(0.75)
    assert math.sqrt(gaussian_w2_squared(ms, ss, mt, st_)) == pytest.approx(0.5 * total, abs=1e-7)
