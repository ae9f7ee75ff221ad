import json
import math
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd

from utils.reporting import build_report, canonical_json, certificate_hash, to_jsonable, write_report
from utils.verdicts import Status


class TestJsonable(unittest.TestCase):
    def test_special_values(self):
        doc = to_jsonable({'inf': math.inf, 'neg': -math.inf, 'nan': math.nan, 'frac': Fraction(3, 4),
                           'z': 1 + 2j, 'status': Status.HOLDS, 'arr': np.arange(3), 'flag': np.bool_(True),
                           1: np.float64(0.5)})
        self.assertEqual(doc['inf'], 'inf')
        self.assertEqual(doc['neg'], '-inf')
        self.assertEqual(doc['nan'], 'nan')
        self.assertEqual(doc['frac'], '3/4')
        self.assertEqual(doc['z'], {'re': 1.0, 'im': 2.0})
        self.assertEqual(doc['status'], 'Holds')
        self.assertEqual(doc['arr'], [0, 1, 2])
        self.assertIs(doc['flag'], True)
        self.assertEqual(doc['1'], 0.5)

    def test_canonical_json_is_sorted(self):
        text = canonical_json({'b': 1, 'a': [math.inf]})
        self.assertTrue(text.endswith('\n'))
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(json.loads(text), {'a': ['inf'], 'b': 1})


class TestCertificates(unittest.TestCase):
    def test_hash_ignores_key_order(self):
        first = certificate_hash({'c': Fraction(1, 6), 'xi_period': 6})
        second = certificate_hash({'xi_period': 6, 'c': Fraction(1, 6)})
        self.assertEqual(first, second)
        self.assertNotEqual(first, certificate_hash({'c': Fraction(1, 7), 'xi_period': 6}))

    def test_report_layout(self):
        report = build_report('scan', {'ok': True}, {'bound': {'c': '1/6'}}, ['b-tag', 'a-tag', 'b-tag'],
                              {'xi_max': 64})
        self.assertEqual(report['tags'], ['a-tag', 'b-tag'])
        self.assertEqual(report['certificates']['bound']['sha256'], certificate_hash({'c': '1/6'}))
        self.assertEqual(report['flags'], {'xi_max': 64})
        self.assertIn('version', report)


class TestWriteReport(unittest.TestCase):
    def test_json_and_csv_outputs(self):
        frame = pd.DataFrame({'band': [0, 1], 'log_sup': [0.0, -1.5]})
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / 'nested'
            json_only = write_report({'command': 'decay'}, str(out), 'decay', 'json', {'bands': frame})
            self.assertEqual([p.name for p in json_only], ['decay.json'])
            written = write_report({'command': 'decay'}, str(out), 'decay', 'csv', {'bands': frame})
            self.assertEqual([p.name for p in written], ['decay.json', 'decay_bands.csv'])
            lines = (out / 'decay_bands.csv').read_text().splitlines()
            self.assertEqual(lines[0], 'band,log_sup')
            self.assertEqual(lines[2], '1,-1.5')


if __name__ == '__main__':
    unittest.main()
