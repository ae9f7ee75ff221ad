import io
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from utils.coeffs import TrigPoly
from utils.diophantine import FactorialLiouville, FloatApprox, QuadraticIrrational, Rational
from utils.errors import SpecError
from utils.file_parsers import load_json, parse_alphas, parse_exact_real, parse_field, parse_system
from utils.generate_synthetic_data import example_systems, generate_synthetic_files
from utils.validation import validate_exact_real, validate_field_document, validate_system_document


def _build_cosine_document():
    return {'n': 2, 'coefficients': [[], [{'freq': [1, 0], 're': '1/2'}, {'freq': [-1, 0], 're': '1/2'}]]}


class TestValidation(unittest.TestCase):
    def test_exact_real_tags(self):
        self.assertTrue(validate_exact_real({'tag': 'rational', 'p': 1, 'q': 3})['valid'])
        self.assertTrue(validate_exact_real({'tag': 'quad', 'a': '1/2', 'b': '-1', 'd': 5})['valid'])
        self.assertTrue(validate_exact_real({'tag': 'float', 'v': 0.25})['valid'])
        self.assertFalse(validate_exact_real({'tag': 'rational', 'p': 1, 'q': 0})['valid'])
        self.assertFalse(validate_exact_real({'tag': 'quad', 'a': 'x', 'b': '1', 'd': 2})['valid'])
        self.assertFalse(validate_exact_real({'tag': 'liouville', 'base': 1, 'depth': 4})['valid'])
        result = validate_exact_real({'tag': 'transcendental'})
        self.assertFalse(result['valid'])
        self.assertIn('Unknown exact-real tag', result['message'])

    def test_system_documents(self):
        self.assertTrue(validate_system_document(_build_cosine_document())['valid'])
        self.assertFalse(validate_system_document({'n': 0, 'coefficients': []})['valid'])
        self.assertFalse(validate_system_document({'n': 2, 'coefficients': [[]]})['valid'])
        bad_freq = {'n': 1, 'coefficients': [[{'freq': [True], 're': '1'}]]}
        self.assertFalse(validate_system_document(bad_freq)['valid'])
        bad_re = {'n': 1, 'coefficients': [[{'freq': [0], 're': 0.5}]]}
        self.assertFalse(validate_system_document(bad_re)['valid'])
        bad_constants = {'n': 1, 'coefficients': [[]], 'constants': [{'tag': 'rational', 'p': 1}, {'tag': 'rational', 'p': 2}]}
        self.assertFalse(validate_system_document(bad_constants)['valid'])

    def test_field_documents(self):
        doc = {'n': 1, 'xi_window': 2, 'xi': [{'xi': 1, 'coeffs': [{'tau': [0], 're': 1.0, 'im': 0.0}]}]}
        self.assertEqual(validate_field_document(doc)['modes'], 1)
        doc['xi'].append({'xi': 1, 'coeffs': []})
        self.assertFalse(validate_field_document(doc)['valid'])
        outside = {'n': 1, 'xi_window': 2, 'xi': [{'xi': 3, 'coeffs': []}]}
        self.assertFalse(validate_field_document(outside)['valid'])


class TestParsers(unittest.TestCase):
    def test_parse_exact_reals(self):
        self.assertEqual(parse_exact_real({'tag': 'rational', 'p': 2, 'q': 4}), Rational(Fraction(1, 2)))
        self.assertEqual(parse_exact_real({'tag': 'quad', 'a': '0', 'b': '1', 'd': 2}),
                         QuadraticIrrational(Fraction(0), Fraction(1), 2))
        self.assertEqual(parse_exact_real({'tag': 'liouville', 'base': 3, 'depth': 5, 'offset': '1/3'}),
                         FactorialLiouville(3, 5, Fraction(1, 3)))
        self.assertIsInstance(parse_exact_real({'tag': 'float', 'v': 1.5}), FloatApprox)
        with self.assertRaises(SpecError):
            parse_exact_real({'tag': 'rational'})

    def test_parse_system_from_dict_and_stream(self):
        sys = parse_system(_build_cosine_document())
        self.assertTrue(sys.coefficient(1).is_zero())
        self.assertEqual(sys.coefficient(2), TrigPoly.cos(2, (1, 0)))
        self.assertEqual(sys.constants, (Rational(0), Rational(0)))
        stream = io.StringIO('{"n": 1, "coefficients": [[]], "constants": [{"tag": "rational", "p": 1, "q": 3}]}')
        self.assertEqual(parse_system(stream).alphas(), [Rational(Fraction(1, 3))])

    def test_malformed_json(self):
        with self.assertRaises(SpecError) as ctx:
            load_json(io.StringIO('{"n": 1,'))
        self.assertIn('Malformed JSON', str(ctx.exception))
        with self.assertRaises(SpecError):
            load_json('/nonexistent/system.json')

    def test_parse_alphas(self):
        self.assertEqual(parse_alphas([{'tag': 'rational', 'p': 1, 'q': 2}]), [Rational(Fraction(1, 2))])
        self.assertEqual(len(parse_alphas({'alphas': [{'tag': 'float', 'v': 0.3}, {'tag': 'rational', 'p': 0}]})), 2)
        with self.assertRaises(SpecError):
            parse_alphas({'betas': []})
        with self.assertRaises(SpecError):
            parse_alphas([])

    def test_generated_fixtures_parse_back(self):
        with tempfile.TemporaryDirectory() as tmp:
            written = generate_synthetic_files(Path(tmp), seed=7)
            systems = example_systems()
            for path in written:
                if path.name.startswith('system_'):
                    parsed = parse_system(str(path))
                    self.assertEqual(parsed.to_dict(), systems[path.stem[len('system_'):]].to_dict())
                else:
                    self.assertEqual(parse_field(str(path)).n, 1)
            self.assertEqual(len(written), len(systems) + 3)


if __name__ == '__main__':
    unittest.main()
