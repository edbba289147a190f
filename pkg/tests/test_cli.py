import json

import pytest

from constants import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION
from main import build_parser, main
from tests.conftest import RUNNING_EXAMPLE


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def last_error(err):
    return json.loads(err.strip().splitlines()[-1])


@pytest.fixture
def running_doc(profile_doc):
    return profile_doc(RUNNING_EXAMPLE)


class TestNorm:
    @pytest.mark.parametrize("extra,label,value", [
        (['--named', 'S'], 'S', 3.0),
        (['--named', 'Lambda'], 'Lambda', 3.0),
        (['--named', 'S_n', '--n', '3'], 'S_3', 4.0),
        (['--named', 'L_n', '--n', '4'], 'L_4', 8.0),
        (['--named', 'S_n_e', '--n', '2', '--e', '0.5,0'], 'S_2^e', 4.5),
    ])
    def test_named(self, capsys, running_doc, extra, label, value):
        code, out, _ = run(capsys, ['norm', '--phi', running_doc, *extra])
        assert code == EXIT_OK
        assert json.loads(out) == {'norm': label, 'value': value}

    def test_psi_function(self, capsys, running_doc, profile_doc):
        code, out, _ = run(capsys, ['norm', '--phi', running_doc, '--psi', profile_doc((0, 1, 0))])
        assert code == EXIT_OK
        assert json.loads(out) == {'norm': 'psi', 'value': 3.0}

    def test_norm_descriptors(self, capsys, running_doc, write_doc):
        classic = write_doc({'norm': {'kind': 'classic', 'name': 'tv'}})
        weights = write_doc({'norm': {'kind': 'weights', 'weights': [1, -1, 1]}})
        assert json.loads(run(capsys, ['norm', '--phi', running_doc, '--psi', classic])[1])['value'] == 8.0
        assert json.loads(run(capsys, ['norm', '--phi', running_doc, '--psi', weights])[1])['value'] == 4.0

    def test_breakpoint_document(self, capsys, write_doc):
        doc = write_doc({'function': {'format': 'breakpoints', 'points': [[0, 0], [1, 1.5], [2, 3], [3, 1], [4, 2], [5, 0]]}})
        code, out, _ = run(capsys, ['norm', '--phi', doc, '--named', 'S_n', '--n', '3'])
        assert code == EXIT_OK
        assert json.loads(out)['value'] == 4.0

    @pytest.mark.parametrize("extra", [
        [],
        ['--named', 'S_n'],
        ['--named', 'S_n', '--n', '0'],
        ['--named', 'S_n_e', '--n', '2', '--e', '0.5'],
        ['--named', 'S_n_e', '--n', '1', '--e', '-1'],
    ])
    def test_invalid_norm(self, capsys, running_doc, extra):
        code, out, err = run(capsys, ['norm', '--phi', running_doc, *extra])
        assert code == EXIT_VALIDATION
        assert out == ''
        assert last_error(err)['error'] == 'ValidationError'

    def test_psi_and_named_together(self, capsys, running_doc, profile_doc):
        code, _, _ = run(capsys, ['norm', '--phi', running_doc, '--psi', profile_doc((0, 1)), '--named', 'S'])
        assert code == EXIT_VALIDATION


class TestSpectrum:
    def test_csv_default(self, capsys, running_doc):
        code, out, _ = run(capsys, ['spectrum', '--phi', running_doc, '--family', 'S', '--max-n', '4'])
        assert code == EXIT_OK
        assert out == "n,value\n1,3.0\n2,3.0\n3,4.0\n4,4.0\n"

    def test_json(self, capsys, running_doc):
        code, out, _ = run(capsys, ['--format', 'json', 'spectrum', '--phi', running_doc,
                                    '--family', 'L', '--max-n', '4', '--jobs', '2'])
        assert code == EXIT_OK
        assert [row['value'] for row in json.loads(out)] == [3.0, 6.0, 6.0, 8.0]

    def test_bad_family(self, capsys, running_doc):
        code, _, err = run(capsys, ['spectrum', '--phi', running_doc, '--family', 'Q', '--max-n', '4'])
        assert code == EXIT_VALIDATION
        assert last_error(err)['error'] == 'ValidationError'


class TestReconstruct:
    def test_running_example(self, capsys, running_doc):
        code, out, _ = run(capsys, ['reconstruct', '--phi', running_doc])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload['profile'] == list(RUNNING_EXAMPLE)
        assert payload['l'] == 3
        assert payload['match'] is True
        assert payload['sign_ambiguous'] is True

    def test_negated_example_matches(self, capsys, profile_doc):
        code, out, _ = run(capsys, ['reconstruct', '--phi', profile_doc((0, -3, -1, -2, 0))])
        assert code == EXIT_OK
        assert json.loads(out)['match'] is True

    @pytest.mark.parametrize("values,error", [
        ((0, 1), 'DomainError'),
        ((0,), 'ValidationError'),
    ])
    def test_unsupported_inputs(self, capsys, profile_doc, values, error):
        code, out, err = run(capsys, ['reconstruct', '--phi', profile_doc(values)])
        assert code == EXIT_VALIDATION
        assert out == ''
        assert last_error(err)['error'] == error

    def test_capacity(self, capsys, running_doc):
        code, out, err = run(capsys, ['reconstruct', '--phi', running_doc, '--n-cap', '2'])
        assert code == EXIT_NUMERICAL
        assert out == ''
        assert last_error(err)['error'] == 'CapacityError'


class TestCompare:
    def test_peaks(self, capsys, profile_doc):
        code, out, _ = run(capsys, ['compare', '--phi', profile_doc((0, 3, 0)), '--psi', profile_doc((0, 5, 0))])
        assert code == EXIT_OK
        assert json.loads(out) == {'lower': 2.0, 'upper': 2.0, 'refinement': 256, 'witness_psi': 'S'}

    def test_refine(self, capsys, running_doc, profile_doc):
        code, out, _ = run(capsys, ['compare', '--phi', running_doc, '--psi', profile_doc((0, 3, 0)), '--refine', '64'])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload['refinement'] == 64
        assert payload['lower'] == pytest.approx(1 / 3)
        assert payload['witness_psi'] == 'S_3'
        assert payload['lower'] <= payload['upper']


class TestVerify:
    def test_running_example_passes(self, capsys, running_doc):
        code, out, _ = run(capsys, ['verify', '--phi', running_doc, '--trials', '5', '--refine', '64'])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload['passed'] is True
        names = {check['name'] for check in payload['checks']}
        assert {'closed_forms', 'exchange_property', 'reconstruction', 'sn_spectrum'} <= names

    def test_non_compact_skips_compact_checks(self, capsys, profile_doc):
        code, out, _ = run(capsys, ['verify', '--phi', profile_doc((0, 2, -1)), '--trials', '4', '--refine', '64'])
        names = {check['name'] for check in json.loads(out)['checks']}
        assert code == EXIT_OK
        assert 'reconstruction' not in names

    def test_deterministic(self, capsys, running_doc):
        argv = ['verify', '--phi', running_doc, '--trials', '4', '--refine', '32', '--seed', '7', '--jobs', '3']
        first = run(capsys, argv)
        second = run(capsys, argv)
        assert first[:2] == second[:2]


class TestCatalog:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, ['catalog'])
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == 'name,kind,weights'
        assert lines[1] == 'S,standard,[1.0]'
        assert lines[2] == 'Lambda,standard,"[1.0, -1.0]"'
        assert lines[-1] == 'asym,classic,'
        assert len(lines) == 1 + 11 + 5

    def test_json(self, capsys):
        code, out, _ = run(capsys, ['--format', 'json', 'catalog'])
        rows = json.loads(out)
        assert code == EXIT_OK
        assert rows[0] == {'name': 'S', 'kind': 'standard', 'weights': [1.0]}


class TestInputErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ['norm', '--phi', str(tmp_path / 'absent.json'), '--named', 'S'])
        assert code == EXIT_VALIDATION
        assert last_error(err)['error'] == 'ValidationError'

    def test_invalid_json(self, capsys, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"function": ', encoding='utf-8')
        code, _, err = run(capsys, ['norm', '--phi', str(path), '--named', 'S'])
        assert code == EXIT_VALIDATION
        assert 'not valid JSON' in last_error(err)['message']

    @pytest.mark.parametrize("doc", [
        {'function': {'format': 'profile', 'values': [0, 1, 2]}},
        {'function': {'format': 'profile', 'values': [1, 0]}},
        {'function': {'format': 'breakpoints', 'points': [[1, 0], [0, 1]]}},
        {'function': {'format': 'spline'}},
        {'signal': []},
    ])
    def test_malformed_documents(self, capsys, write_doc, doc):
        code, _, _ = run(capsys, ['norm', '--phi', write_doc(doc), '--named', 'S'])
        assert code == EXIT_VALIDATION

    @pytest.mark.parametrize("argv", [
        [],
        ['transform'],
        ['--format', 'xml', 'catalog'],
        ['spectrum', '--family', 'S', '--max-n', '3'],
    ])
    def test_usage_errors(self, capsys, argv):
        code, out, err = run(capsys, argv)
        assert code == EXIT_VALIDATION
        assert out == ''
        assert last_error(err)['error'] == 'ValidationError'

    @pytest.mark.parametrize("argv", [
        ["norm", "--phi", "f.json"],
        ["spectrum", "--phi", "f.json", "--family", "S", "--max-n", "1"],
        ["reconstruct", "--phi", "f.json"],
        ["compare", "--phi", "f.json", "--psi", "g.json"],
        ["verify", "--phi", "f.json"],
        ["catalog"],
    ])
    def test_parser_knows_every_command(self, argv):
        assert build_parser().parse_args(argv).command == argv[0]
