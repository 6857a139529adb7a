"""MixtureSpec documents: JSON loading with field-precise validation and dumping."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np

from ..atoms import Atom, GeneratorProfile, build_profile
from ..constants import SIMPLEX_ATOL
from ..errors import FamilyMismatchError, MixotError, SchemaError
from ..mixtures import Mixture
from ..symmetry import GroupKind, SlaterMixture, SymmetryGroup, build_group, symmetrize

LOCATION_SCATTER = 'location_scatter'
SLATER_DETERMINANT = 'slater_determinant'
REPRESENTATIONS = (LOCATION_SCATTER, SLATER_DETERMINANT)


@dataclass(frozen=True)
class MixtureSpec:
    """A validated mixture together with how it was described."""

    mixture: Mixture
    generator: GeneratorProfile
    group: Optional[SymmetryGroup] = None
    representation: str = LOCATION_SCATTER
    source: Optional[str] = None

    @property
    def is_slater(self) -> bool:
        return self.representation == SLATER_DETERMINANT

    def with_mixture(self, mixture: Mixture) -> 'MixtureSpec':
        return MixtureSpec(mixture, self.generator, self.group, self.representation)

    def density_source(self) -> Union[Mixture, SlaterMixture]:
        """What gets rasterized: the mixture, or its squared-Slater-determinant density."""
        if self.is_slater:
            return SlaterMixture.from_mixture(self.mixture)
        return self.mixture

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'family': self.generator.to_dict()}
        if self.group is not None:
            payload['group'] = self.group.to_dict()
        if self.is_slater:
            payload['representation'] = SLATER_DETERMINANT
        payload['components'] = self.mixture.to_dict()['components']
        return payload


def _require(mapping: Mapping, key: str, path: str) -> Any:
    if not isinstance(mapping, Mapping):
        raise SchemaError('invalid_type', 'expected an object', field=path or '<root>')
    if key not in mapping:
        raise SchemaError('missing_field', 'field is required', field=f'{path}.{key}' if path else key)
    return mapping[key]


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError('invalid_number', f'expected a number, got {type(value).__name__}', field=field)
    if not math.isfinite(value):
        raise SchemaError('invalid_number', 'numbers must be finite', field=field)
    return float(value)


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError('invalid_integer', 'expected a positive integer', field=field)
    return value


def _vector(value: Any, field: str) -> List[float]:
    if not isinstance(value, list) or not value:
        raise SchemaError('invalid_vector', 'expected a non-empty list of numbers', field=field)
    return [_number(item, f'{field}[{idx}]') for idx, item in enumerate(value)]


def _matrix(value: Any, field: str) -> List[List[float]]:
    if not isinstance(value, list) or not value:
        raise SchemaError('invalid_matrix', 'expected a non-empty list of rows', field=field)
    return [_vector(row, f'{field}[{idx}]') for idx, row in enumerate(value)]


def _family(document: Mapping) -> GeneratorProfile:
    family = _require(document, 'family', '')
    kind = _require(family, 'kind', 'family')
    if not isinstance(kind, str):
        raise SchemaError('invalid_family', 'kind must be a string', field='family.kind')
    dim = _integer(_require(family, 'dim', 'family'), 'family.dim')
    params = family.get('params') or {}
    if not isinstance(params, Mapping):
        raise SchemaError('invalid_family', 'params must be an object', field='family.params')
    numbers = {str(name): _number(value, f'family.params.{name}') for name, value in params.items()}
    try:
        return build_profile(kind, dim, numbers)
    except MixotError as exc:
        raise SchemaError(exc.code, str(exc), field='family')


def _group(document: Mapping, dim: int) -> Optional[SymmetryGroup]:
    group = document.get('group')
    if group is None:
        return None
    kind = _require(group, 'kind', 'group')
    n = group.get('n')
    d = group.get('d')
    try:
        return build_group(
            kind,
            dim,
            None if n is None else _integer(n, 'group.n'),
            None if d is None else _integer(d, 'group.d'),
        )
    except SchemaError:
        raise
    except MixotError as exc:
        raise SchemaError(exc.code, str(exc), field='group')


def spec_from_dict(document: Any, source: Optional[str] = None) -> MixtureSpec:
    """Validate a decoded MixtureSpec document."""
    if not isinstance(document, Mapping):
        raise SchemaError('invalid_type', 'a mixture spec must be a JSON object', field='<root>')
    generator = _family(document)
    group = _group(document, generator.dim)
    representation = document.get('representation', LOCATION_SCATTER)
    if representation not in REPRESENTATIONS:
        raise SchemaError('invalid_representation', f'expected one of {REPRESENTATIONS}', field='representation')
    if representation == SLATER_DETERMINANT:
        if generator.kind.value != 'gaussian' or group is None or group.kind is not GroupKind.PERMUTATION:
            raise SchemaError(
                'invalid_representation',
                'slater_determinant needs a gaussian family and a permutation group',
                field='representation',
            )

    components = _require(document, 'components', '')
    if not isinstance(components, list) or not components:
        raise SchemaError('empty_mixture', 'expected a non-empty list of components', field='components')

    weights: List[float] = []
    atoms = []
    for idx, component in enumerate(components):
        path = f'components[{idx}]'
        weight = _number(_require(component, 'weight', path), f'{path}.weight')
        if weight < 0.0:
            raise SchemaError('negative_weight', 'weights must be nonnegative', field=f'{path}.weight')
        mean = _vector(_require(component, 'mean', path), f'{path}.mean')
        scatter = _matrix(_require(component, 'scatter', path), f'{path}.scatter')
        try:
            atom = Atom(generator, np.array(mean), np.array(scatter))
            atoms.append(symmetrize(atom, group) if group is not None else atom)
        except MixotError as exc:
            raise SchemaError(exc.code, str(exc), field=path)
        weights.append(weight)

    total = math.fsum(weights)
    if abs(total - 1.0) > SIMPLEX_ATOL:
        raise SchemaError('weights_not_normalized', f'weights sum to {total!r}, expected 1', field='components')
    mixture = Mixture(np.array(weights), tuple(atoms))
    if representation == SLATER_DETERMINANT:
        try:
            SlaterMixture.from_mixture(mixture)
        except MixotError as exc:
            raise SchemaError(exc.code, str(exc), field='components')
    return MixtureSpec(mixture, generator, group, representation, source)


def parse_spec(text: str, source: Optional[str] = None) -> MixtureSpec:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError('invalid_json', exc.msg, line=exc.lineno)
    return spec_from_dict(document, source)


def load_spec(path: Union[str, Path]) -> MixtureSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise SchemaError('unreadable_spec', f'{path}: {exc.strerror or exc}')
    return parse_spec(text, str(path))


def ensure_compatible(specs: List[MixtureSpec]) -> None:
    """Specs combined in one computation share family, group and representation."""
    first = specs[0]
    for other in specs[1:]:
        if other.mixture.family != first.mixture.family:
            raise FamilyMismatchError('family_mismatch', 'mixture specs use different families or groups')
        if other.representation != first.representation:
            raise FamilyMismatchError('family_mismatch', 'mixture specs use different representations')


def dump_spec(spec: MixtureSpec) -> str:
    """Deterministic JSON text; floats keep their shortest round-trip form."""
    return json.dumps(spec.to_dict(), indent=2) + '\n'


__all__ = [
    'LOCATION_SCATTER',
    'MixtureSpec',
    'SLATER_DETERMINANT',
    'dump_spec',
    'ensure_compatible',
    'load_spec',
    'parse_spec',
    'spec_from_dict',
]
