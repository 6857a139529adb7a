import math

import numpy as np
import pytest
from scipy import integrate

from mixot.atoms import Atom, atom_w2, gamma_profile, gaussian_profile
from mixot.errors import DegenerateDeterminantError, InvalidInputError, UnsupportedError
from mixot.symmetry import (
    SlaterDeterminantAtom,
    SlaterMixture,
    build_group,
    group_orbit,
    parity_group,
    permutation_group,
    rotation_matrix,
    sd_from_symmetrized,
    sd_mixture_barycenter_pair,
    sd_mixture_distance,
    sd_normalization,
    sd_to_symmetrized,
    slater_det_density,
    so2_align,
    so2_group,
    sym_barycenter,
    sym_distance,
    sym_multimarginal,
    sym_pdf,
    symmetrize,
)

from conftest import random_spd

G1 = gaussian_profile(1)
G2 = gaussian_profile(2)
PARITY1 = parity_group(1)


def gauss(mean, var):
    return Atom(G1, [mean], [[var]])


def random_atom(rng, dim=2):
    return Atom(gaussian_profile(dim), 2.0 * rng.normal(size=dim), random_spd(rng, dim))


def test_finite_groups_are_closed():
    parity = parity_group(3)
    assert parity.order == 2
    parity.check()
    perms = permutation_group(3, 2)
    assert perms.order == 6 and perms.dim == 6
    perms.check()
    assert perms.elements()[0].label == 'e'
    assert np.allclose(perms.haar_weights(), 1.0 / 6.0)


def test_group_construction_errors():
    with pytest.raises(UnsupportedError):
        so2_group().elements()
    with pytest.raises(UnsupportedError):
        build_group('so2', 3)
    with pytest.raises(InvalidInputError) as exc:
        build_group('dihedral', 2)
    assert exc.value.code == 'unknown_group'
    with pytest.raises(InvalidInputError) as exc:
        build_group('permutation', 4, n=3, d=1)
    assert exc.value.code == 'dimension_mismatch'


def test_parity_orbits():
    assert len(group_orbit(gauss(0.0, 2.0), PARITY1)) == 1
    orbit = group_orbit(gauss(2.0, 1.0), PARITY1)
    assert sorted(atom.mean[0] for atom in orbit) == [-2.0, 2.0]


def test_permutation_orbit_swaps_blocks():
    atom = Atom(G2, [1.0, 3.0], np.diag([1.0, 4.0]))
    orbit = group_orbit(atom, permutation_group(2, 1))
    assert len(orbit) == 2
    swapped = orbit[1]
    assert np.allclose(swapped.mean, [3.0, 1.0])
    assert np.allclose(swapped.scatter, np.diag([4.0, 1.0]))


def test_symmetrize_picks_one_representative_per_orbit():
    left, right = symmetrize(gauss(2.0, 1.0), PARITY1), symmetrize(gauss(-2.0, 1.0), PARITY1)
    assert left.representative.mean[0] == right.representative.mean[0] == -2.0
    assert left.is_close(right, 1e-12)


def test_symmetrize_rejects_non_elliptical_and_wrong_dimension():
    with pytest.raises(UnsupportedError):
        symmetrize(Atom(gamma_profile(3.0, 9.0), [0.0], [[1.0]]), PARITY1)
    with pytest.raises(InvalidInputError) as exc:
        symmetrize(gauss(0.0, 1.0), parity_group(2))
    assert exc.value.code == 'dimension_mismatch'


def test_sym_distance_examples():
    abar = symmetrize(gauss(1.0, 1.0), PARITY1)
    assert sym_distance(abar, abar)[0] == 0.0

    value, element = sym_distance(symmetrize(gauss(2.0, 1.0), PARITY1), symmetrize(gauss(-2.0, 1.0), PARITY1))
    assert value == 0.0
    assert element.label == 'e'

    value, _ = sym_distance(symmetrize(gauss(1.0, 1.0), PARITY1), symmetrize(gauss(3.0, 1.0), PARITY1))
    assert value == pytest.approx(2.0, rel=1e-12)


def test_sym_distance_group_mismatch():
    a = symmetrize(Atom(G2, [1.0, 0.0], np.eye(2)), parity_group(2))
    b = symmetrize(Atom(G2, [1.0, 0.0], np.eye(2)), permutation_group(2, 1))
    with pytest.raises(InvalidInputError) as exc:
        sym_distance(a, b)
    assert exc.value.code == 'group_mismatch'


@pytest.mark.parametrize('group', [parity_group(2), permutation_group(2, 1)], ids=['parity', 'permutation'])
def test_quotient_metric_axioms(rng, group):
    for _ in range(10):
        a, b, c = (symmetrize(random_atom(rng), group) for _ in range(3))
        dab, dbc, dac = sym_distance(a, b)[0], sym_distance(b, c)[0], sym_distance(a, c)[0]
        assert abs(dab - sym_distance(b, a)[0]) <= 1e-9
        assert dac <= dab + dbc + 1e-9


@pytest.mark.parametrize(
    'group',
    [parity_group(1), parity_group(2), permutation_group(2, 1), permutation_group(3, 1), permutation_group(2, 2)],
    ids=['parity1', 'parity2', 'perm2', 'perm3', 'perm2x2'],
)
def test_quotient_distance_ignores_orbit_moves(rng, group):
    elements = group.elements()
    for _ in range(20):
        a, b = random_atom(rng, group.dim), random_atom(rng, group.dim)
        g, h = elements[int(rng.integers(len(elements)))], elements[int(rng.integers(len(elements)))]
        reference, _ = sym_distance(symmetrize(a, group), symmetrize(b, group))
        moved, _ = sym_distance(symmetrize(g.act(a), group), symmetrize(h.act(b), group))
        assert moved == reference


def test_so2_quotient_distance_ignores_rotations(rng):
    group = so2_group()
    for angle_a, angle_b in [(0.3, -1.2), (2.5, 0.7), (-2.0, 3.0)]:
        a, b = random_atom(rng), random_atom(rng)
        reference, _ = sym_distance(symmetrize(a, group), symmetrize(b, group))
        moved, _ = sym_distance(
            symmetrize(group.rotation(angle_a).act(a), group),
            symmetrize(group.rotation(angle_b).act(b), group),
        )
        assert moved == pytest.approx(reference, rel=1e-7, abs=1e-9)


def test_so2_align_recovers_rotation(rng):
    a0 = Atom(G2, [1.5, -0.5], random_spd(rng, 2))
    rot = rotation_matrix(1.1)
    a1 = a0.pushforward(rot)
    angle, value = so2_align(a0, a1)
    assert value <= 1e-6
    aligned = a1.pushforward(rotation_matrix(angle))
    assert np.allclose(aligned.mean, a0.mean, atol=1e-6)
    assert np.allclose(aligned.scatter, a0.scatter, atol=1e-6)


def test_so2_align_isotropic_centered_atoms():
    _, value = so2_align(Atom(G2, [0.0, 0.0], np.eye(2)), Atom(G2, [0.0, 0.0], 4.0 * np.eye(2)))
    assert value == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_so2_align_beats_dense_scan(rng):
    a0, a1 = random_atom(rng), random_atom(rng)
    _, value = so2_align(a0, a1)
    scan = []
    for theta in np.linspace(0.0, 2.0 * math.pi, 10_000, endpoint=False):
        rotated = a1.pushforward(rotation_matrix(theta))
        scan.append(atom_w2(a0, rotated))
    assert value <= min(scan) + 1e-8
    assert value == pytest.approx(min(scan), abs=1e-5)


def test_so2_align_needs_planar_atoms():
    with pytest.raises(UnsupportedError):
        so2_align(gauss(0.0, 1.0), gauss(1.0, 1.0))


def test_sym_multimarginal_examples(rng):
    group = permutation_group(2, 1)
    abar = symmetrize(random_atom(rng), group)
    value, elements = sym_multimarginal([abar, abar, abar], [0.2, 0.3, 0.5])
    assert value == pytest.approx(0.0, abs=1e-6)
    assert elements[0].label == 'e'

    for _ in range(5):
        a0, a1 = symmetrize(random_atom(rng), group), symmetrize(random_atom(rng), group)
        value, _ = sym_multimarginal([a0, a1], [0.3, 0.7])
        assert value == pytest.approx(math.sqrt(0.3 * 0.7) * sym_distance(a0, a1)[0], rel=1e-8)


def test_sym_multimarginal_ignores_orbit_choice(rng):
    group = permutation_group(2, 1)
    atoms = [random_atom(rng) for _ in range(3)]
    partner = group.elements()[1].act(atoms[1])
    weights = [0.2, 0.3, 0.5]
    base, _ = sym_multimarginal([symmetrize(atom, group) for atom in atoms], weights)
    swapped, _ = sym_multimarginal([symmetrize(atoms[0], group), symmetrize(partner, group), symmetrize(atoms[2], group)], weights)
    assert swapped == pytest.approx(base, rel=1e-12)


def test_sym_barycenter_examples():
    abar = symmetrize(gauss(2.0, 1.0), PARITY1)
    assert sym_barycenter([abar], [1.0]) is abar

    same = sym_barycenter([abar, abar], [0.4, 0.6])
    assert same.is_close(abar, 1e-9)

    # Ausrichtung waehlt e: N(-2, 1) liegt naeher an N(-3, 4) als an N(3, 4)
    bar = sym_barycenter([abar, symmetrize(gauss(-3.0, 4.0), PARITY1)], [0.5, 0.5])
    assert bar.representative.mean[0] == pytest.approx(-2.5, abs=1e-12)
    assert bar.representative.scatter[0, 0] == pytest.approx(2.25, rel=1e-10)


def test_sym_pdf_is_group_average():
    abar = symmetrize(gauss(2.0, 1.0), PARITY1)
    points = np.array([[-1.3], [0.0], [2.0]])
    expected = 0.5 * (
        np.exp(-0.5 * (points[:, 0] - 2.0) ** 2) + np.exp(-0.5 * (points[:, 0] + 2.0) ** 2)
    ) / math.sqrt(2.0 * math.pi)
    assert np.allclose(sym_pdf(abar, points), expected, rtol=1e-13)
    assert sym_pdf(abar, np.array([[1.3]]))[0] == pytest.approx(sym_pdf(abar, np.array([[-1.3]]))[0], rel=1e-14)


ORBITAL_MEANS = [[0.0], [1.5]]
ORBITAL_SCATTERS = [[[1.0]], [[0.5]]]


def test_slater_density_vanishes_on_coincidence():
    assert slater_det_density(ORBITAL_MEANS, ORBITAL_SCATTERS, [0.7, 0.7]) == 0.0


def test_slater_density_is_exchange_symmetric():
    value = slater_det_density(ORBITAL_MEANS, ORBITAL_SCATTERS, [0.2, 1.1])
    assert value > 0.0
    assert slater_det_density(ORBITAL_MEANS, ORBITAL_SCATTERS, [1.1, 0.2]) == pytest.approx(value, rel=1e-12)


def test_slater_density_integrates_to_one():
    atom = SlaterDeterminantAtom(ORBITAL_MEANS, ORBITAL_SCATTERS)
    total, _ = integrate.dblquad(
        lambda y, x: float(atom.pdf([x, y])[0]),
        -10.0, 10.0, -10.0, 10.0, epsabs=1e-9, epsrel=1e-8,
    )
    assert total == pytest.approx(1.0, abs=1e-5)


def test_slater_normalization_closed_matches_quadrature():
    closed = sd_normalization(ORBITAL_MEANS, ORBITAL_SCATTERS)
    numeric = sd_normalization(ORBITAL_MEANS, ORBITAL_SCATTERS, method='quadrature')
    assert numeric == pytest.approx(closed, rel=1e-6)
    with pytest.raises(InvalidInputError) as exc:
        sd_normalization(ORBITAL_MEANS, ORBITAL_SCATTERS, method='montecarlo')
    assert exc.value.code == 'unknown_method'


def test_duplicate_orbitals_are_degenerate():
    with pytest.raises(DegenerateDeterminantError) as exc:
        SlaterDeterminantAtom([[1.0], [1.0]], [[[2.0]], [[2.0]]])
    assert exc.value.code == 'duplicate_orbitals'


def test_symmetrized_roundtrip_keeps_density(rng):
    atom = SlaterDeterminantAtom([[1.0, 0.0], [-0.5, 2.0]], [random_spd(rng, 2), random_spd(rng, 2)])
    abar = sd_to_symmetrized(atom)
    assert abar.group == permutation_group(2, 2)
    back = sd_from_symmetrized(abar)
    points = rng.normal(size=(50, 4))
    assert np.allclose(back.pdf(points), atom.pdf(points), rtol=1e-10, atol=0.0)


def test_from_symmetrized_needs_block_diagonal_scatter():
    scatter = np.array([[2.0, 0.5], [0.5, 1.0]])
    with pytest.raises(InvalidInputError) as exc:
        sd_from_symmetrized(symmetrize(Atom(G2, [0.0, 1.0], scatter), permutation_group(2, 1)))
    assert exc.value.code == 'not_block_diagonal'
    with pytest.raises(InvalidInputError) as exc:
        sd_from_symmetrized(symmetrize(Atom(G2, [0.0, 1.0], np.eye(2)), parity_group(2)))
    assert exc.value.code == 'group_mismatch'


def sd_single(means):
    return SlaterMixture([1.0], (SlaterDeterminantAtom([[m] for m in means], [[[1.0]]] * len(means)),))


def test_sd_mixture_distance_examples():
    mu = sd_single([0.0, 4.0])
    assert sd_mixture_distance(mu, mu) == 0.0
    assert sd_mixture_distance(mu, sd_single([4.0, 0.0])) == 0.0
    assert sd_mixture_distance(mu, sd_single([1.0, 5.0])) == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_sd_mixture_block_shape_mismatch():
    with pytest.raises(InvalidInputError) as exc:
        sd_mixture_distance(sd_single([0.0, 4.0]), sd_single([0.0, 1.0, 2.0]))
    assert exc.value.code == 'block_shape_mismatch'


def test_sd_barycenter_moves_orbitals():
    bar = sd_mixture_barycenter_pair(sd_single([0.0, 4.0]), sd_single([5.0, 1.0]), 0.5)
    assert len(bar.atoms) == 1
    atom = bar.atoms[0]
    assert sorted(atom.means.ravel().tolist()) == pytest.approx([0.5, 4.5], abs=1e-12)
    assert np.allclose(atom.scatters, 1.0, rtol=1e-10)
    points = np.array([[0.5, 4.5], [1.0, 1.0]])
    values = bar.pdf(points)
    assert values[0] > 0.0 and values[1] == 0.0
