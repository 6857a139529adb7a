"""Generator profiles of the location-scatter atom families."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy import integrate, optimize, special, stats

from ..constants import H_CONDITION_TOL, QUAD_EPSREL, TAIL_RADIUS_MAX
from ..errors import InvalidInputError, UnsupportedError


class GeneratorKind(str, Enum):
    GAUSSIAN = 'gaussian'
    SLATER = 'slater'
    WIGNER = 'wigner'
    GAMMA1D = 'gamma1d'
    CUSTOM = 'custom'


ELLIPTICAL_KINDS = frozenset({GeneratorKind.GAUSSIAN, GeneratorKind.SLATER, GeneratorKind.WIGNER, GeneratorKind.CUSTOM})


def slater_alpha(dim: int) -> float:
    return math.sqrt(dim + 1.0)


def wigner_alpha(dim: int) -> float:
    return 1.0 / (dim + 3.0)


@dataclass(frozen=True)
class GeneratorProfile:
    """Generator of a location-scatter family.

    Elliptical kinds are described by their radial profile ``h`` so that the
    unit-scatter density is ``h(|y|^2) / Z``. ``Gamma1D`` is the gamma law
    standardized to mean 0 and variance 1.
    """

    kind: GeneratorKind
    dim: int
    params: Tuple[Tuple[str, float], ...] = ()
    radial: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    support: float = math.inf

    def __post_init__(self) -> None:
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidInputError('invalid_dimension', f'profile dimension must be a positive integer, got {self.dim!r}')
        if self.kind is GeneratorKind.GAMMA1D and self.dim != 1:
            raise InvalidInputError('invalid_dimension', 'gamma1d profiles are one-dimensional')
        if self.kind is GeneratorKind.CUSTOM and self.radial is None:
            raise InvalidInputError('missing_profile', 'custom elliptical profiles need a radial function h')

    @property
    def is_elliptical(self) -> bool:
        return self.kind in ELLIPTICAL_KINDS

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def params_dict(self) -> Dict[str, float]:
        return dict(self.params)

    def h(self, x) -> np.ndarray:
        """Radial profile evaluated at squared Mahalanobis radii ``x >= 0``."""
        x = np.asarray(x, dtype=float)
        if self.kind is GeneratorKind.GAUSSIAN:
            return np.exp(-0.5 * x)
        if self.kind is GeneratorKind.SLATER:
            return np.exp(-self.param('alpha') * np.sqrt(np.abs(x)))
        if self.kind is GeneratorKind.WIGNER:
            alpha = self.param('alpha')
            inside = x * alpha < 1.0
            return np.where(inside, np.sqrt(np.clip(1.0 - alpha * x, 0.0, None)), 0.0)
        if self.kind is GeneratorKind.CUSTOM:
            values = np.asarray(self.radial(x), dtype=float)
            return np.where(x <= self.support, values, 0.0)
        raise UnsupportedError('unsupported_profile', f'{self.kind.value} has no radial profile')

    def h_support(self) -> float:
        """Largest squared radius with nonzero ``h``."""
        if self.kind is GeneratorKind.WIGNER:
            return 1.0 / self.param('alpha')
        return self.support

    def radial_moment(self, power: int) -> float:
        """Integral of ``r**power * h(r**2)`` over the positive half-line."""
        if not self.is_elliptical:
            raise UnsupportedError('unsupported_profile', 'radial moments exist for elliptical profiles only')
        upper = math.sqrt(self.h_support())

        def integrand(r: float) -> float:
            return r**power * float(self.h(r * r))

        value, _ = integrate.quad(integrand, 0.0, upper, epsrel=QUAD_EPSREL, epsabs=0.0, limit=500)
        return value

    def unit_normalization(self) -> float:
        """Normalization constant for unit scatter (multiply by sqrt(det S))."""
        return _unit_normalization(self)

    def to_dict(self) -> dict:
        return {'kind': self.kind.value, 'dim': int(self.dim), 'params': self.params_dict()}


@functools.lru_cache(maxsize=256)
def _unit_normalization(profile: GeneratorProfile) -> float:
    d = profile.dim
    if profile.kind is GeneratorKind.GAUSSIAN:
        return (2.0 * math.pi) ** (d / 2.0)
    if profile.kind is GeneratorKind.SLATER:
        alpha = profile.param('alpha')
        return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0) * special.gamma(d) / alpha**d
    if profile.kind is GeneratorKind.WIGNER:
        alpha = profile.param('alpha')
        return math.pi ** ((d + 1) / 2.0) * alpha ** (-d / 2.0) / (2.0 * special.gamma((d + 3) / 2.0))
    if profile.kind is GeneratorKind.GAMMA1D:
        return 1.0
    return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0) * profile.radial_moment(d - 1)


def tail_moment_fraction(profile: GeneratorProfile, radius: float) -> float:
    """Share of the second moment of the unit generator lying beyond ``radius``.

    Elliptical kinds measure the Mahalanobis radius, ``Gamma1D`` both tails
    of the standardized law.
    """
    radius = float(radius)
    if radius <= 0.0:
        return 1.0
    if profile.kind is GeneratorKind.GAMMA1D:
        return _gamma_tail_fraction(profile.param('alpha'), radius)
    upper = math.sqrt(profile.h_support())
    if radius >= upper:
        return 0.0
    d = profile.dim

    def integrand(r: float) -> float:
        return r ** (d + 1) * float(profile.h(r * r))

    value, _ = integrate.quad(integrand, radius, upper, epsrel=QUAD_EPSREL, epsabs=0.0, limit=500)
    return value / profile.radial_moment(d + 1)


def _gamma_tail_fraction(alpha: float, radius: float) -> float:
    # E[(X - a)^2; X > c] ueber unvollstaendige Gammafunktionen, X ~ Gamma(a, 1)
    def partial(c: float, upper: bool) -> float:
        part = special.gammaincc if upper else special.gammainc
        second = alpha * (alpha + 1.0) * part(alpha + 2.0, c)
        first = alpha * part(alpha + 1.0, c)
        zeroth = part(alpha, c)
        return second - 2.0 * alpha * first + alpha * alpha * zeroth

    spread = radius * math.sqrt(alpha)
    total = partial(alpha + spread, True)
    if alpha - spread > 0.0:
        total += partial(alpha - spread, False)
    return max(total / alpha, 0.0)


def tail_radius(profile: GeneratorProfile, tol: float) -> float:
    """Smallest radius (in units of the standard deviation) whose tail holds at most ``tol`` of the second moment."""
    if not 0.0 < tol < 1.0:
        raise InvalidInputError('invalid_tolerance', f'tail tolerance must lie in (0, 1), got {tol}')
    return _tail_radius(profile, float(tol))


@functools.lru_cache(maxsize=256)
def _tail_radius(profile: GeneratorProfile, tol: float) -> float:
    def excess(r: float) -> float:
        return tail_moment_fraction(profile, r) - tol

    lo, hi = 0.0, 1.0
    while excess(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > TAIL_RADIUS_MAX:
            raise UnsupportedError('heavy_tail', f'{profile.kind.value} tail exceeds radius {TAIL_RADIUS_MAX}')
    return float(optimize.brentq(excess, lo, hi, xtol=1e-9))


def check_h_condition(profile: GeneratorProfile) -> float:
    """Return ``|ratio - d|`` for the covariance moment condition of an elliptical profile."""
    if profile.kind is GeneratorKind.GAMMA1D:
        raise UnsupportedError('unsupported_profile', 'the moment condition applies to elliptical profiles only')
    d = profile.dim
    ratio = profile.radial_moment(d + 1) / profile.radial_moment(d - 1)
    return abs(ratio - d)


def _validated(profile: GeneratorProfile) -> GeneratorProfile:
    defect = check_h_condition(profile)
    if defect > H_CONDITION_TOL:
        raise InvalidInputError(
            'moment_condition_violated',
            f'{profile.kind.value} profile in dimension {profile.dim} violates the covariance moment condition '
            f'(defect {defect:.3e})',
        )
    return profile


def gaussian_profile(dim: int) -> GeneratorProfile:
    return GeneratorProfile(GeneratorKind.GAUSSIAN, int(dim))


def slater_profile(dim: int, alpha: Optional[float] = None) -> GeneratorProfile:
    value = slater_alpha(dim) if alpha is None else float(alpha)
    profile = GeneratorProfile(GeneratorKind.SLATER, int(dim), (('alpha', value),))
    if alpha is not None:
        _validated(profile)
    return profile


def wigner_profile(dim: int, alpha: Optional[float] = None) -> GeneratorProfile:
    value = wigner_alpha(dim) if alpha is None else float(alpha)
    profile = GeneratorProfile(GeneratorKind.WIGNER, int(dim), (('alpha', value),))
    if alpha is not None:
        _validated(profile)
    return profile


def gamma_profile(alpha: float, beta: float) -> GeneratorProfile:
    """Gamma(shape alpha, rate beta) standardized to zero mean and unit variance.

    Any rate is accepted; the standardization removes it from the atom
    density, so only the shape changes the family.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (alpha > 0.0 and beta > 0.0) or not (math.isfinite(alpha) and math.isfinite(beta)):
        raise InvalidInputError('invalid_parameter', f'gamma parameters must be positive, got alpha={alpha}, beta={beta}')
    return GeneratorProfile(GeneratorKind.GAMMA1D, 1, (('alpha', alpha), ('beta', beta)))


def elliptical_profile(h: Callable[[np.ndarray], np.ndarray], dim: int, support: float = math.inf) -> GeneratorProfile:
    """User-supplied elliptical profile; rejected unless it satisfies the moment condition."""
    profile = GeneratorProfile(GeneratorKind.CUSTOM, int(dim), radial=h, support=float(support))
    return _validated(profile)


def standard_gamma_pdf(profile: GeneratorProfile, y) -> np.ndarray:
    """Density of the standardized gamma law; zero left of ``-sqrt(alpha)``."""
    alpha = profile.param('alpha')
    beta = profile.param('beta')
    scale = math.sqrt(alpha) / beta
    raw = alpha / beta + np.asarray(y, dtype=float) * scale
    values = stats.gamma.pdf(raw, a=alpha, scale=1.0 / beta) * scale
    return np.where(raw > 0.0, values, 0.0)


PROFILE_BUILDERS: Mapping[str, Callable[..., GeneratorProfile]] = {
    GeneratorKind.GAUSSIAN.value: gaussian_profile,
    GeneratorKind.SLATER.value: slater_profile,
    GeneratorKind.WIGNER.value: wigner_profile,
}


def build_profile(kind: str, dim: int, params: Optional[Mapping[str, float]] = None) -> GeneratorProfile:
    """Construct a built-in profile from its serialized description."""
    params = dict(params or {})
    if kind == GeneratorKind.GAMMA1D.value:
        if dim != 1:
            raise InvalidInputError('invalid_dimension', 'gamma1d profiles are one-dimensional')
        missing = {'alpha', 'beta'} - set(params)
        if missing:
            raise InvalidInputError('missing_parameter', f'gamma1d needs parameters {sorted(missing)}')
        return gamma_profile(params['alpha'], params['beta'])
    builder = PROFILE_BUILDERS.get(kind)
    if builder is None:
        raise InvalidInputError('unknown_family', f'unknown family kind {kind!r}')
    unknown = set(params) - ({'alpha'} if kind != GeneratorKind.GAUSSIAN.value else set())
    if unknown:
        raise InvalidInputError('unknown_parameter', f'{kind} does not take parameters {sorted(unknown)}')
    if kind == GeneratorKind.GAUSSIAN.value:
        return builder(dim)
    return builder(dim, params.get('alpha'))


__all__ = [
    'ELLIPTICAL_KINDS',
    'GeneratorKind',
    'GeneratorProfile',
    'build_profile',
    'check_h_condition',
    'elliptical_profile',
    'gamma_profile',
    'gaussian_profile',
    'slater_alpha',
    'slater_profile',
    'standard_gamma_pdf',
    'tail_moment_fraction',
    'tail_radius',
    'wigner_alpha',
    'wigner_profile',
]
