import json
import os
import tempfile
import unittest

from click.testing import CliRunner

from app import cli
from utils.generate_synthetic_data import gaussian_taper_field
from utils.reporting import canonical_json

SQRT2 = {'tag': 'quad', 'a': '0', 'b': '1', 'd': 2}
COS_T1 = [{'freq': [1, 0], 're': '1/2'}, {'freq': [-1, 0], 're': '1/2'}]


def _build_system(n, coefficients=None, constants=None):
    doc = {'n': n, 'coefficients': coefficients or [[] for _ in range(n)]}
    if constants is not None:
        doc['constants'] = constants
    return doc


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = os.path.join(self.tmp.name, 'reports')
        self.runner = CliRunner()

    def _write(self, name, doc):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            if isinstance(doc, str):
                f.write(doc)
            else:
                f.write(canonical_json(doc))
        return path

    def _invoke(self, *args):
        return self.runner.invoke(cli, ['--output-dir', self.out, *args])

    def _report(self, stem):
        with open(os.path.join(self.out, f"{stem}.json")) as f:
            return json.load(f)

    def test_classify_finite_type_holds(self):
        path = self._write('finite_type.json', _build_system(2, [[], COS_T1]))
        result = self._invoke('classify', path, '--xi-max', '32')
        self.assertEqual(result.exit_code, 0, result.output)
        report = self._report('classify')
        self.assertEqual(report['exit_code'], 0)
        self.assertEqual(len(report['result']['verdicts']), 9)
        self.assertIn('finite-type-propagation', report['tags'])
        self.assertEqual(len(report['certificates']['finite-type']['sha256']), 64)

    def test_classify_zero_system_fails(self):
        path = self._write('zero.json', _build_system(2))
        result = self._invoke('classify', path, '--xi-max', '32')
        self.assertEqual(result.exit_code, 1, result.output)
        statuses = self._report('classify')['statuses']
        self.assertIn('Fails', statuses)

    def test_reports_are_byte_stable(self):
        path = self._write('sqrt2.json', _build_system(1, constants=[SQRT2]))
        contents = []
        for _ in range(2):
            self.assertEqual(self._invoke('classify', path, '--xi-max', '64').exit_code, 0)
            with open(os.path.join(self.out, 'classify.json'), 'rb') as f:
                contents.append(f.read())
        self.assertEqual(contents[0], contents[1])

    def test_csv_tables(self):
        path = self._write('sqrt2.json', _build_system(1, constants=[SQRT2]))
        result = self._invoke('--format', 'csv', 'classify', path, '--xi-max', '64')
        self.assertEqual(result.exit_code, 0, result.output)
        with open(os.path.join(self.out, 'classify_verdicts.csv')) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], 'property,status,reasons')
        self.assertEqual(len(lines), 10)

    def test_malformed_json_is_a_usage_error(self):
        path = self._write('broken.json', '{"n": 2, "coefficients": [')
        result = self._invoke('classify', path)
        self.assertEqual(result.exit_code, 3)
        self.assertIn('Malformed JSON', result.output)

    def test_invalid_system_document(self):
        path = self._write('bad.json', _build_system(2, [[{'freq': [1], 're': '1'}], []]))
        result = self._invoke('classify', path)
        self.assertEqual(result.exit_code, 3)

    def test_missing_file_and_bad_flags(self):
        self.assertEqual(self._invoke('classify', os.path.join(self.tmp.name, 'nope.json')).exit_code, 3)
        path = self._write('sqrt2.json', _build_system(1, constants=[SQRT2]))
        self.assertEqual(self._invoke('classify', path, '--xi-max', '0').exit_code, 3)
        self.assertEqual(self._invoke('classify', path, '--bogus').exit_code, 3)
        self.assertEqual(self._invoke('frobnicate').exit_code, 3)

    def test_scan_rationals(self):
        path = self._write('alphas.json', [{'tag': 'rational', 'p': 1, 'q': 2}, {'tag': 'rational', 'p': 1, 'q': 3}])
        result = self._invoke('scan', path, '--xi-max', '32')
        self.assertEqual(result.exit_code, 1, result.output)
        self.assertEqual(self._report('scan')['statuses'], ['Fails', 'Holds'])

    def test_scan_quadratic_irrational(self):
        path = self._write('sqrt2.json', _build_system(1, constants=[SQRT2]))
        result = self._invoke('scan', path, '--xi-max', '64')
        self.assertEqual(result.exit_code, 0, result.output)

    def test_solve_manufactured(self):
        path = self._write('sqrt2.json', _build_system(1, constants=[SQRT2]))
        result = self._invoke('solve', path, '--xi-max', '8', '--t-window', '4')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self._report('solve')['statuses'], ['Holds', 'Holds'])

    def test_counterexample_for_liouville(self):
        path = self._write('liouville.json', _build_system(1, constants=[{'tag': 'liouville', 'base': 2, 'depth': 4}]))
        result = self._invoke('counterexample', path, '--xi-max', '64')
        self.assertEqual(result.exit_code, 1, result.output)

    def test_decay_of_gaussian_field(self):
        u = gaussian_taper_field(1, 32, 3, sigma=1.0, seed=2)
        path = self._write('field.json', u.to_dict())
        result = self._invoke('decay', path)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self._report('decay')['result']['decay']['verdict'], 'RapidDecay')

    def test_decay_point_dimension(self):
        path = self._write('field.json', gaussian_taper_field(1, 8, 2).to_dict())
        self.assertEqual(self._invoke('decay', path, '--mode', 'at_point').exit_code, 3)
        self.assertEqual(self._invoke('decay', path, '--mode', 'at_point', '--point', '0.1,0.2').exit_code, 3)

    def test_microlocal_singular_directions(self):
        self.assertEqual(self._invoke('microlocal', '--field', 'gaussian').exit_code, 0)
        self.assertEqual(self._invoke('microlocal', '--field', 'line').exit_code, 1)

    def test_microlocal_reports_carry_the_auxiliary_checks(self):
        self.assertEqual(self._invoke('microlocal', '--field', 'gaussian').exit_code, 0)
        self.assertTrue(self._report('microlocal')['result']['cone_norm']['consistent'])
        self.assertEqual(self._invoke('microlocal', '--check', 'ellipticity').exit_code, 0)
        self.assertIn('0', self._report('microlocal')['result']['kernel_constants'])
        self._invoke('microlocal', '--check', 'regularity')
        self.assertIn(self._report('microlocal')['result']['regularity_limit']['status'],
                      ('Holds', 'Fails', 'Undetermined'))

    def test_microlocal_t_elliptic_needs_system(self):
        self.assertEqual(self._invoke('microlocal', '--check', 't-elliptic').exit_code, 3)


if __name__ == '__main__':
    unittest.main()
