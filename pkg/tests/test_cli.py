import json
import logging

import pytest
from click.testing import CliRunner
from openpyxl import load_workbook

from mixot.cli import cli, dump_spec, exit_code_for, load_spec, parse_spec, spec_from_dict
from mixot.errors import (
    ConvergenceError,
    FamilyMismatchError,
    InvalidInputError,
    OracleViolationError,
    SchemaError,
    ValidationFailedError,
)
from mixot.mixtures import canonicalize, is_canonical, mixture_distance
from mixot.symmetry import SymmetrizedAtom
from mixot.workers import configure_threads

GAUSS_1D = {'kind': 'gaussian', 'dim': 1}


def gaussian_spec(*components, family=GAUSS_1D, **extra):
    document = {'family': family, 'components': [
        {'weight': weight, 'mean': [mean], 'scatter': [[var]]} for weight, mean, var in components
    ]}
    document.update(extra)
    return document


def slater_pair():
    family = {'kind': 'slater', 'dim': 1}
    left = gaussian_spec((0.5, -2.0, 1.0), (0.5, 2.0, 0.5), family=family)
    right = gaussian_spec((0.3, -1.0, 2.0), (0.7, 3.0, 1.0), family=family)
    return left, right


@pytest.fixture(autouse=True)
def reset_process_state():
    yield
    logger = logging.getLogger('mixot')
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    configure_threads(None)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def write_spec(tmp_path):
    def _write(name, document):
        path = tmp_path / name
        path.write_text(document if isinstance(document, str) else json.dumps(document), encoding='utf-8')
        return str(path)

    return _write


def invoke(runner, *args):
    return runner.invoke(cli, ['--log-level', 'ERROR', *args])


def error_of(result):
    return json.loads(result.stderr.strip().splitlines()[-1])


def test_exit_code_contract():
    assert exit_code_for(ValidationFailedError('validation_failed')) == 1
    assert exit_code_for(SchemaError('invalid_json')) == 2
    assert exit_code_for(InvalidInputError('weights_not_normalized')) == 2
    assert exit_code_for(FamilyMismatchError('family_mismatch')) == 3
    assert exit_code_for(InvalidInputError('group_mismatch')) == 3
    assert exit_code_for(InvalidInputError('block_shape_mismatch')) == 3
    assert exit_code_for(ConvergenceError('fixed_point_not_converged')) == 4
    assert exit_code_for(OracleViolationError('oracle_sandwich_violated')) == 5


def test_schema_reports_field_paths():
    document = gaussian_spec((0.5, 0.0, 1.0), (0.5, 1.0, 1.0))
    del document['components'][1]['scatter']
    with pytest.raises(SchemaError) as exc:
        spec_from_dict(document)
    assert exc.value.field == 'components[1].scatter'

    document = gaussian_spec((0.5, 0.0, 1.0), (0.5, 1.0, -1.0))
    with pytest.raises(SchemaError) as exc:
        spec_from_dict(document)
    assert exc.value.field == 'components[1]'

    with pytest.raises(SchemaError) as exc:
        spec_from_dict(gaussian_spec((0.5, 0.0, 1.0), (0.6, 1.0, 1.0)))
    assert exc.value.code == 'weights_not_normalized'

    with pytest.raises(SchemaError) as exc:
        spec_from_dict(gaussian_spec((1.0, 0.0, 1.0), family={'kind': 'cauchy', 'dim': 1}))
    assert exc.value.code == 'unknown_family'


def test_schema_reports_json_line():
    with pytest.raises(SchemaError) as exc:
        parse_spec('{\n  "family": {"kind": "gaussian", "dim": 1},\n  "components": [\n}')
    assert exc.value.code == 'invalid_json'
    assert exc.value.line == 4
    assert 'line 4' in str(exc.value)


def test_schema_symmetrizes_and_round_trips():
    document = gaussian_spec((0.5, 2.0, 1.0), (0.5, -1.0, 0.5), group={'kind': 'parity'})
    spec = spec_from_dict(document)
    assert all(isinstance(atom, SymmetrizedAtom) for atom in spec.mixture.atoms)
    again = parse_spec(dump_spec(spec))
    assert dump_spec(again) == dump_spec(spec)


def test_slater_representation_needs_permutation_group():
    document = {
        'family': {'kind': 'gaussian', 'dim': 2},
        'representation': 'slater_determinant',
        'components': [{'weight': 1.0, 'mean': [0.0, 4.0], 'scatter': [[1.0, 0.0], [0.0, 1.0]]}],
    }
    with pytest.raises(SchemaError) as exc:
        spec_from_dict(document)
    assert exc.value.field == 'representation'
    document['group'] = {'kind': 'permutation', 'n': 2, 'd': 1}
    spec = spec_from_dict(document)
    assert spec.is_slater
    assert spec.to_dict()['representation'] == 'slater_determinant'


def test_distance_of_identical_specs(runner, write_spec):
    path = write_spec('a.json', gaussian_spec((0.4, -1.0, 1.0), (0.6, 2.0, 3.0)))
    result = invoke(runner, 'distance', path, path, '--no-timing')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['value'] == 0.0
    assert 'wall_time_ms' not in report
    assert [entry['w'] for entry in report['plan']] == pytest.approx([0.4, 0.6])


def test_distance_matches_library_call(runner, write_spec):
    left, right = slater_pair()
    path_a, path_b = write_spec('a.json', left), write_spec('b.json', right)
    result = invoke(runner, 'distance', path_a, path_b)
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    expected, _ = mixture_distance(load_spec(path_a).mixture, load_spec(path_b).mixture)
    assert report['value'] == expected
    assert report['wall_time_ms'] >= 0.0


def test_distance_with_explicit_atom_distances(runner, write_spec):
    spec = gaussian_spec((0.5, 0.0, 1.0), (0.5, 1.0, 1.0))
    path = write_spec('a.json', spec)
    matrix = write_spec('d.json', [[1.0, 2.0], [2.0, 1.0]])
    result = invoke(runner, 'distance', path, path, '--p', '3', '--atom-distances', matrix, '--no-timing')
    assert result.exit_code == 0
    assert json.loads(result.stdout)['value'] == pytest.approx(1.0)


def test_malformed_spec_exits_with_input_code(runner, write_spec):
    good = write_spec('good.json', gaussian_spec((1.0, 0.0, 1.0)))
    broken = write_spec('broken.json', '{"family": {"kind": "gaussian", "dim": 1},\n "components": [')
    result = invoke(runner, 'distance', good, broken)
    assert result.exit_code == 2
    error = error_of(result)
    assert error['error'] == 'invalid_json'
    assert error['line'] == 2

    missing = gaussian_spec((1.0, 0.0, 1.0))
    del missing['components'][0]['weight']
    result = invoke(runner, 'distance', good, write_spec('missing.json', missing))
    assert result.exit_code == 2
    assert 'components[0].weight' in error_of(result)['message']

    result = invoke(runner, 'distance', good, 'does-not-exist.json')
    assert result.exit_code == 2
    assert error_of(result)['error'] == 'unreadable_spec'


def test_family_mismatch_exit_code(runner, write_spec):
    left, _ = slater_pair()
    gaussian = write_spec('g.json', gaussian_spec((1.0, 0.0, 1.0)))
    result = invoke(runner, 'distance', gaussian, write_spec('s.json', left))
    assert result.exit_code == 3
    assert error_of(result)['error'] == 'family_mismatch'

    parity = write_spec('p.json', gaussian_spec((1.0, 1.0, 1.0), group={'kind': 'parity'}))
    result = invoke(runner, 'distance', gaussian, parity)
    assert result.exit_code == 3


def test_barycenter_default_path(runner, write_spec, tmp_path):
    left, right = slater_pair()
    path_a, path_b = write_spec('a.json', left), write_spec('b.json', right)
    out = tmp_path / 'out'
    result = invoke(runner, 'barycenter', path_a, path_b, '--out', str(out))
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    expected = ['bary_t0.json', 'bary_t0.25.json', 'bary_t0.5.json', 'bary_t0.75.json', 'bary_t1.json']
    assert report['files'] == expected
    assert sorted(p.name for p in out.iterdir()) == sorted(expected)

    spec_a = load_spec(path_a)
    canonical = spec_a.with_mixture(canonicalize(spec_a.mixture))
    assert (out / 'bary_t0.json').read_text(encoding='utf-8') == dump_spec(canonical)

    middle = load_spec(out / 'bary_t0.5.json')
    assert is_canonical(middle.mixture)
    assert dump_spec(middle.with_mixture(canonicalize(middle.mixture))) == (out / 'bary_t0.5.json').read_text(encoding='utf-8')


def test_barycenter_is_deterministic(runner, write_spec, tmp_path):
    left, right = slater_pair()
    path_a, path_b = write_spec('a.json', left), write_spec('b.json', right)
    for name in ('one', 'two'):
        assert invoke(runner, 'barycenter', path_a, path_b, '--t', '0.3', '--out', str(tmp_path / name)).exit_code == 0
    assert (tmp_path / 'one' / 'bary_t0.3.json').read_bytes() == (tmp_path / 'two' / 'bary_t0.3.json').read_bytes()


def test_barycenter_with_weights(runner, write_spec, tmp_path):
    paths = [write_spec(f'{idx}.json', gaussian_spec((1.0, mean, var))) for idx, (mean, var) in enumerate([(0.0, 1.0), (2.0, 4.0), (-3.0, 9.0)])]
    out = tmp_path / 'out'
    result = invoke(runner, 'barycenter', *paths, '--weights', '0.2,0.5,0.3', '--out', str(out))
    assert result.exit_code == 0
    assert json.loads(result.stdout)['files'] == ['bary_w0.2_0.5_0.3.json']
    document = json.loads((out / 'bary_w0.2_0.5_0.3.json').read_text(encoding='utf-8'))
    assert len(document['components']) == 1
    assert document['components'][0]['mean'][0] == pytest.approx(0.2 * 0.0 + 0.5 * 2.0 + 0.3 * -3.0)

    result = invoke(runner, 'barycenter', *paths, '--weights', '0.2,0.5,0.3', '--t', '0.5', '--out', str(out))
    assert result.exit_code == 2
    result = invoke(runner, 'barycenter', *paths, '--out', str(out))
    assert result.exit_code == 2
    assert error_of(result)['error'] == 'invalid_arguments'


def test_barycenter_rasterize_and_workbook(runner, write_spec, tmp_path):
    left, right = slater_pair()
    path_a, path_b = write_spec('a.json', left), write_spec('b.json', right)
    out = tmp_path / 'out'
    result = invoke(runner, 'barycenter', path_a, path_b, '--t', '0.5', '--rasterize', '--grid', '50', '--xlsx', '--out', str(out))
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['files'] == ['bary_t0.5.json', 'bary_t0.5.csv', 'barycenters.xlsx']
    assert report['grid']['points'] == [50]

    lines = (out / 'bary_t0.5.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'x,value'
    assert len(lines) == 51
    assert all(float(line.split(',')[1]) >= 0.0 for line in lines[1:])

    workbook = load_workbook(out / 'barycenters.xlsx')
    assert workbook.sheetnames == ['Summary', 'Components']
    components = json.loads((out / 'bary_t0.5.json').read_text())['components']
    sheet = workbook['Components']
    assert sheet.max_row == 1 + len(components)
    assert [cell.value for cell in sheet[1]] == ['Label', 'Component', 'Weight', 'mean_1', 'scatter_11']
    first = [cell.value for cell in sheet[2]]
    assert first[0] == 't0.5'
    assert first[2:] == pytest.approx([components[0]['weight'], components[0]['mean'][0], components[0]['scatter'][0][0]])


def test_barycenter_oracle_csv(runner, write_spec, tmp_path):
    path_a = write_spec('a.json', gaussian_spec((1.0, 0.0, 1.0)))
    path_b = write_spec('b.json', gaussian_spec((1.0, 3.0, 4.0)))
    out = tmp_path / 'out'
    result = invoke(runner, 'barycenter', path_a, path_b, '--t', '0.5', '--oracle', '--grid', '100', '--out', str(out))
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['files'] == ['bary_t0.5.json', 'bary_t0.5_w2.csv']
    assert [run['label'] for run in report['oracle']] == ['t0.5']

    (lo, hi), = report['grid']['bounds']
    rows = [line.split(',') for line in (out / 'bary_t0.5_w2.csv').read_text(encoding='utf-8').splitlines()[1:]]
    assert len(rows) == 100
    values = [float(value) for _, value in rows]
    assert min(values) >= 0.0
    assert sum(values) * (hi - lo) / 99 == pytest.approx(1.0, abs=1e-9)


def test_compare_single_gaussians(runner, write_spec):
    path_a = write_spec('a.json', gaussian_spec((1.0, 0.0, 1.0)))
    path_b = write_spec('b.json', gaussian_spec((1.0, 3.0, 4.0)))
    result = invoke(runner, 'compare', path_a, path_b)
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['mixture_value'] == pytest.approx(10.0**0.5, rel=1e-12)
    assert abs(report['relative_gap']) <= 0.02
    assert report['sandwich']['checked'] is True
    assert report['sandwich']['ok'] is True
    assert report['grid']['points'] == [200]


def test_compare_parity_symmetrized_specs(runner, write_spec):
    path_a = write_spec('a.json', gaussian_spec((0.5, 3.0, 0.25), (0.5, 1.5, 0.1), group={'kind': 'parity'}))
    path_b = write_spec('b.json', gaussian_spec((1.0, 2.5, 0.3), group={'kind': 'parity'}))
    result = invoke(runner, 'compare', path_a, path_b, '--grid', '120')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['mixture_value'] > 0.0
    assert report['oracle_value'] > 0.0
    assert report['sandwich']['ok'] is True


def test_validate_solver_suite(runner):
    result = invoke(runner, 'validate', '--suite', 'solver', '--seed', '3', '--trials', '5')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['suite'] == 'solver'
    assert report['ok'] is True
    assert all(check['trials'] == 5 for check in report['checks'])


def test_validate_metric_suite(runner):
    result = invoke(runner, 'validate', '--suite', 'metric', '--trials', '3')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    triangle = next(check for check in report['checks'] if check['name'] == 'triangle_inequality')
    assert triangle['max_violation'] <= 1e-9


def test_invalid_setting_exits_with_input_code(runner, monkeypatch):
    monkeypatch.setenv('MIXOT_THREADS', 'many')
    result = invoke(runner, 'validate', '--suite', 'solver', '--trials', '1')
    assert result.exit_code == 2
    assert error_of(result)['error'] == 'invalid_setting'


def test_thread_cap_comes_from_settings(monkeypatch, tmp_path):
    from mixot.config import Settings, load_settings
    from mixot.workers import resolve_threads

    env_file = tmp_path / '.env'
    env_file.write_text('MIXOT_THREADS=5\n', encoding='utf-8')
    monkeypatch.delenv('MIXOT_THREADS', raising=False)
    settings = load_settings(env_file)
    assert settings.threads == 5

    configure_threads(settings)
    assert resolve_threads() == 5
    assert resolve_threads(2) == 2

    # die Umgebung wirkt nur ueber geladene Settings
    monkeypatch.setenv('MIXOT_THREADS', '9')
    assert resolve_threads() == 5
    configure_threads(None)
    assert resolve_threads() == 1
    configure_threads(Settings(threads=3))
    assert resolve_threads() == 3


def test_barycenter_figure_pipeline(runner, write_spec, tmp_path):
    left, right = slater_pair()
    path_a, path_b = write_spec('a.json', left), write_spec('b.json', right)
    out = tmp_path / 'out'
    result = invoke(runner, 'barycenter', path_a, path_b, '--rasterize', '--out', str(out))
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    labels = ['t0', 't0.25', 't0.5', 't0.75', 't1']
    assert sorted(report['files']) == sorted([f'bary_{label}.json' for label in labels] + [f'bary_{label}.csv' for label in labels])
    assert report['grid']['points'] == [200]

    (lo, hi), = report['grid']['bounds']
    for label in labels:
        lines = (out / f'bary_{label}.csv').read_text(encoding='utf-8').splitlines()
        assert len(lines) == 201
        values = [float(line.split(',')[1]) for line in lines[1:]]
        assert sum(values) * (hi - lo) / 199 == pytest.approx(1.0, abs=1e-6)
    assert len(json.loads((out / 'bary_t0.5.json').read_text())['components']) == 3


def test_validate_sparsity_suite(runner):
    result = invoke(runner, 'validate', '--suite', 'sparsity', '--trials', '5')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['ok'] is True
    names = {check['name']: check for check in report['checks']}
    assert names['multimarginal_nonzeros']['max_violation'] == 0.0
    assert names['multimarginal_marginals']['max_violation'] <= 1e-10


def test_validate_symmetry_suite(runner):
    result = invoke(runner, 'validate', '--suite', 'symmetry', '--trials', '1')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['ok'] is True
    names = {check['name']: check for check in report['checks']}
    assert names['quotient_invariance']['max_violation'] == 0.0
    assert names['group_axioms']['max_violation'] == 0.0


def test_validate_geodesic_suite(runner):
    result = invoke(runner, 'validate', '--suite', 'geodesic', '--seed', '1', '--trials', '8')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    speed = next(check for check in report['checks'] if check['name'] == 'constant_speed')
    assert speed['trials'] == 8
    assert speed['tolerance'] == 1e-7
    assert speed['max_violation'] <= 1e-7
