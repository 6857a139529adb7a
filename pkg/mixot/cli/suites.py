"""Randomized invariant suites behind ``mixot validate``.

Every suite returns a list of :class:`CheckResult`; a check passes when the
largest violation seen over its trials stays within its tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from ..atoms import Atom, GeneratorKind, GeneratorProfile, build_profile, gamma_profile, gaussian_profile
from ..grid import (
    auto_spec,
    cross_region,
    plan_region_mass,
    rasterize_mixture,
    sinkhorn_barycenter,
    symmetry_defect,
)
from ..mixtures import Mixture, mixture_barycenter_multi, mixture_barycenter_pair, mixture_distance
from ..spd import barycenter_covariance, sqrt_spd
from ..symmetry import (
    SlaterDeterminantAtom,
    parity_group,
    permutation_group,
    sd_from_symmetrized,
    sd_normalization,
    sd_to_symmetrized,
    sym_distance,
    symmetrize,
)
from ..transport import brute_force_transport, solve_multimarginal, solve_transport

logger = logging.getLogger(__name__)

SUITE_FAMILIES = (
    GeneratorKind.GAUSSIAN.value,
    GeneratorKind.SLATER.value,
    GeneratorKind.WIGNER.value,
    GeneratorKind.GAMMA1D.value,
)
QUOTIENT_SAMPLES = 25


@dataclass
class CheckResult:
    name: str
    tolerance: float
    trials: int = 0
    max_violation: float = 0.0

    def record(self, violation: float) -> None:
        self.trials += 1
        self.max_violation = max(self.max_violation, float(violation))

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'passed': self.passed,
            'max_violation': self.max_violation,
            'tolerance': self.tolerance,
            'trials': self.trials,
        }


def random_spd(rng: np.random.Generator, dim: int) -> np.ndarray:
    factor = rng.normal(size=(dim, dim))
    return factor @ factor.T + 0.5 * np.eye(dim)


def random_mixture(
    rng: np.random.Generator,
    dim: int,
    max_size: int = 3,
    *,
    generator: Optional[GeneratorProfile] = None,
    min_size: int = 1,
) -> Mixture:
    size = int(rng.integers(min_size, max_size + 1))
    generator = generator or gaussian_profile(dim)
    weights = rng.dirichlet(np.ones(size))
    atoms = tuple(Atom(generator, 3.0 * rng.normal(size=dim), random_spd(rng, dim)) for _ in range(size))
    return Mixture(weights, atoms)


def _family_generator(kind: str, dim: int) -> GeneratorProfile:
    if kind == GeneratorKind.GAMMA1D.value:
        return gamma_profile(3.0, 1.0)
    return build_profile(kind, dim)


def _random_family(rng: np.random.Generator, kind: str) -> GeneratorProfile:
    dim = 1 if kind == GeneratorKind.GAMMA1D.value else int(rng.integers(1, 3))
    return _family_generator(kind, dim)


def _distance(mu0: Mixture, mu1: Mixture) -> float:
    return mixture_distance(mu0, mu1)[0]


def metric_suite(rng: np.random.Generator, trials: int = 1000) -> List[CheckResult]:
    triangle = CheckResult('triangle_inequality', 1e-9)
    symmetry = CheckResult('symmetry', 1e-9)
    identity = CheckResult('identity', 0.0)
    for kind in SUITE_FAMILIES:
        for _ in range(trials):
            generator = _random_family(rng, kind)
            a, b, c = (random_mixture(rng, generator.dim, generator=generator) for _ in range(3))
            d_ab, d_bc, d_ac = _distance(a, b), _distance(b, c), _distance(a, c)
            triangle.record(max(d_ac - d_ab - d_bc, 0.0))
            symmetry.record(abs(d_ab - _distance(b, a)))
            identity.record(_distance(a, a))
    return [triangle, symmetry, identity]


def geodesic_suite(rng: np.random.Generator, trials: int = 100) -> List[CheckResult]:
    speed = CheckResult('constant_speed', 1e-7)
    for idx in range(trials):
        generator = _random_family(rng, SUITE_FAMILIES[idx % len(SUITE_FAMILIES)])
        mu0 = random_mixture(rng, generator.dim, generator=generator)
        mu1 = random_mixture(rng, generator.dim, generator=generator)
        total = _distance(mu0, mu1)
        if total == 0.0:
            speed.record(0.0)
            continue
        s, t = np.sort(rng.uniform(0.0, 1.0, size=2))
        mus = mixture_barycenter_pair(mu0, mu1, float(s))
        mut = mixture_barycenter_pair(mu0, mu1, float(t))
        speed.record(abs(_distance(mus, mut) - (t - s) * total) / total)
    return [speed]


def sparsity_suite(rng: np.random.Generator, trials: int = 100) -> List[CheckResult]:
    vertex = CheckResult('multimarginal_nonzeros', 0.0)
    marginals = CheckResult('multimarginal_marginals', 1e-10)
    components = CheckResult('barycenter_components', 0.0)
    for _ in range(trials):
        q = int(rng.integers(3, 5))
        sizes = [int(rng.integers(2, 4)) for _ in range(q)]
        bound = sum(sizes) - q + 1
        lambdas = [rng.dirichlet(np.ones(size)) for size in sizes]
        plan = solve_multimarginal(lambdas, rng.random(tuple(sizes)))
        vertex.record(max(plan.nonzeros - bound, 0))
        marginals.record(max(np.abs(plan.marginal(axis) - lam).sum() for axis, lam in enumerate(lambdas)))

        mus = [random_mixture(rng, 1, min_size=2) for _ in range(q)]
        bary = mixture_barycenter_multi(mus, rng.dirichlet(np.ones(q)))
        components.record(max(bary.size - (sum(mu.size for mu in mus) - q + 1), 0))
    return [vertex, marginals, components]


def fixedpoint_suite(rng: np.random.Generator, trials: int = 20) -> List[CheckResult]:
    residual = CheckResult('fixed_point_residual', 1e-8)
    for _ in range(trials):
        dim = int(rng.integers(2, 4))
        covs = [random_spd(rng, dim) for _ in range(3)]
        weights = rng.dirichlet(np.ones(3))
        bar = barycenter_covariance(weights, covs)
        root = sqrt_spd(bar)
        image = sum(w * sqrt_spd(root @ cov @ root) for w, cov in zip(weights, covs))
        residual.record(np.linalg.norm(bar - image) / np.linalg.norm(bar))
    return [residual]


def solver_suite(rng: np.random.Generator, trials: int = 50) -> List[CheckResult]:
    optimality = CheckResult('network_simplex_vs_enumeration', 1e-9)
    marginals = CheckResult('plan_marginals', 1e-9)
    for _ in range(trials):
        j, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        a, b = rng.dirichlet(np.ones(j)), rng.dirichlet(np.ones(k))
        cost = rng.random((j, k)) * 10.0
        plan = solve_transport(a, b, cost)
        reference = brute_force_transport(a, b, cost)
        optimality.record(abs(plan.value - reference.value) / (1.0 + reference.value))
        row, column = plan.marginals()
        marginals.record(max(np.abs(row - a).sum(), np.abs(column - b).sum()))
    return [optimality, marginals]


def _parity_mixture(generator, atoms, weights) -> Mixture:
    group = parity_group(generator.dim)
    return Mixture(np.array(weights), tuple(symmetrize(Atom(generator, m, s), group) for m, s in atoms))


def _quotient_defect(rng: np.random.Generator, group) -> float:
    """Change of the quotient distance when both inputs are moved along their orbits."""
    generator = gaussian_profile(group.dim)
    elements = group.elements()
    a, b = (Atom(generator, 3.0 * rng.normal(size=group.dim), random_spd(rng, group.dim)) for _ in range(2))
    g, h = (elements[int(rng.integers(len(elements)))] for _ in range(2))
    reference, _ = sym_distance(symmetrize(a, group), symmetrize(b, group))
    moved, _ = sym_distance(symmetrize(g.act(a), group), symmetrize(h.act(b), group))
    return abs(moved - reference)


def symmetry_suite(rng: np.random.Generator, trials: int = 1) -> List[CheckResult]:
    generator = gaussian_profile(1)
    group = parity_group(1)
    mu0 = _parity_mixture(generator, [([3.0], [[0.25]]), ([1.5], [[0.1]])], [0.5, 0.5])
    mu1 = _parity_mixture(generator, [([2.5], [[0.3]])], [1.0])
    plain = Mixture(np.array([1.0]), (Atom(generator, [2.0], [[1.0]]),))

    spec = auto_spec([mu0, mu1])
    p, q = rasterize_mixture(mu0, spec), rasterize_mixture(mu1, spec)

    invariant = CheckResult('symmetrized_density_defect', 1e-10)
    invariant.record(symmetry_defect(p, group))
    invariant.record(symmetry_defect(q, group))

    detects = CheckResult('plain_density_defect_positive', 0.0)
    detects.record(max(0.1 - symmetry_defect(rasterize_mixture(plain, spec), group), 0.0))

    leakage = CheckResult('cross_support_mass', 1e-3)
    leakage.record(plan_region_mass(p, p, region=cross_region))

    barycenter = CheckResult('sinkhorn_barycenter_defect', 5e-3)
    for _ in range(max(trials, 1)):
        t = float(rng.uniform(0.2, 0.8))
        barycenter.record(symmetry_defect(sinkhorn_barycenter([p, q], [1.0 - t, t]), group))

    finite = (parity_group(1), parity_group(2), permutation_group(2, 1), permutation_group(3, 1), permutation_group(2, 2))
    axioms = CheckResult('group_axioms', 0.0)
    for candidate in finite:
        candidate.check()
        axioms.record(0.0)

    quotient = CheckResult('quotient_invariance', 0.0)
    for _ in range(max(trials, 1) * QUOTIENT_SAMPLES):
        quotient.record(_quotient_defect(rng, finite[int(rng.integers(len(finite)))]))
    return [invariant, detects, leakage, barycenter, axioms, quotient]


def sd_suite(rng: np.random.Generator, trials: int = 3) -> List[CheckResult]:
    normalization = CheckResult('normalization_closed_vs_quadrature', 1e-6)
    roundtrip = CheckResult('isomorphism_roundtrip_density', 1e-12)
    antisymmetry = CheckResult('exchange_symmetry', 1e-12)
    for _ in range(trials):
        means = np.sort(rng.uniform(-2.0, 2.0, size=(2, 1)), axis=0) + np.array([[-0.5], [0.5]])
        scatters = rng.uniform(0.3, 1.5, size=(2, 1, 1))
        closed = sd_normalization(means, scatters)
        quadrature = sd_normalization(means, scatters, method='quadrature')
        normalization.record(abs(closed - quadrature) / closed)

        atom = SlaterDeterminantAtom(means, scatters)
        back = sd_from_symmetrized(sd_to_symmetrized(atom))
        points = rng.normal(size=(32, 2)) * 2.0
        values = atom.pdf(points)
        roundtrip.record(np.max(np.abs(values - back.pdf(points))) / np.max(values))
        antisymmetry.record(np.max(np.abs(values - atom.pdf(points[:, ::-1]))) / np.max(values))
    return [normalization, roundtrip, antisymmetry]


SuiteRunner = Callable[..., List[CheckResult]]

SUITES: Dict[str, SuiteRunner] = {
    'metric': metric_suite,
    'geodesic': geodesic_suite,
    'sparsity': sparsity_suite,
    'fixedpoint': fixedpoint_suite,
    'solver': solver_suite,
    'symmetry': symmetry_suite,
    'sd': sd_suite,
}
SUITE_NAMES = tuple(SUITES) + ('all',)


def run_suite(name: str, seed: int = 0, trials: Optional[int] = None) -> dict:
    """Run one suite (or ``all``) and return the pass/fail report."""
    names = list(SUITES) if name == 'all' else [name]
    checks = []
    for idx, suite_name in enumerate(names):
        rng = np.random.default_rng([seed, idx])
        runner = SUITES[suite_name]
        results = runner(rng) if trials is None else runner(rng, trials)
        logger.info('Suite %s: %d checks', suite_name, len(results))
        checks.extend({'suite': suite_name, **result.to_dict()} for result in results)
    return {'suite': name, 'seed': seed, 'ok': all(check['passed'] for check in checks), 'checks': checks}


__all__ = ['CheckResult', 'SUITES', 'SUITE_NAMES', 'random_mixture', 'random_spd', 'run_suite']
