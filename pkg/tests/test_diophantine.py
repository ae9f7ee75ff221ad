import math
import unittest
from fractions import Fraction

import numpy as np

from utils.diophantine import (DiophantineStatus, FactorialLiouville, FloatApprox, QuadraticIrrational,
                               Rational, WitnessEntry, WitnessSequence, add_exact, classify_sa,
                               dist_to_integer, exp_lower_bound_check, gs_condition_check, liouville_tuple,
                               log_abs, sa_scan)
from utils.errors import DepthTooSmall, SpecError, WitnessInvalid

SQRT2 = QuadraticIrrational(Fraction(0), Fraction(1), 2)


def _build_rational_pair():
    return [Rational(Fraction(1, 2)), Rational(Fraction(1, 3))]


class TestExactReals(unittest.TestCase):
    def test_quadratic_enclosure_contains_root(self):
        lo, hi = SQRT2.enclose(80)
        self.assertLessEqual(lo * lo, 2)
        self.assertGreaterEqual(hi * hi, 2)
        self.assertLessEqual(hi - lo, Fraction(1, 2 ** 80))

    def test_invalid_quadratic_irrationals(self):
        with self.assertRaises(SpecError):
            QuadraticIrrational(Fraction(0), Fraction(1), 4)
        with self.assertRaises(SpecError):
            QuadraticIrrational(Fraction(1), Fraction(0), 2)
        with self.assertRaises(SpecError):
            QuadraticIrrational(Fraction(0), Fraction(1), 12)

    def test_liouville_enclosure(self):
        L = FactorialLiouville(2, 4)
        lo, hi = L.enclose(200)
        self.assertGreater(hi, lo)
        self.assertLessEqual(lo, L.partial_sum(5) + L.tail_bound(5))
        self.assertAlmostEqual(float(L), 0.5 + 0.25 + 2.0 ** -6 + 2.0 ** -24, places=12)
        with self.assertRaises(SpecError):
            FactorialLiouville(1, 4)

    def test_add_exact(self):
        self.assertEqual(add_exact(Rational(Fraction(1, 2)), SQRT2),
                         QuadraticIrrational(Fraction(1, 2), Fraction(1), 2))
        negated = QuadraticIrrational(Fraction(1), Fraction(-1), 2)
        self.assertEqual(add_exact(SQRT2, negated), Rational(Fraction(1)))
        sqrt3 = QuadraticIrrational(Fraction(0), Fraction(1), 3)
        self.assertIsInstance(add_exact(SQRT2, sqrt3), FloatApprox)

    def test_to_dict_tags(self):
        self.assertEqual(Rational(Fraction(2, 3)).to_dict(), {'tag': 'rational', 'p': 2, 'q': 3})
        self.assertEqual(SQRT2.to_dict(), {'tag': 'quad', 'a': '0/1', 'b': '1/1', 'd': 2})
        self.assertEqual(FactorialLiouville(2, 4, Fraction(1, 2)).to_dict(),
                         {'tag': 'liouville', 'base': 2, 'depth': 4, 'offset': '1/2'})

    def test_log_abs(self):
        self.assertEqual(log_abs(Fraction(0)), -math.inf)
        self.assertAlmostEqual(log_abs(Fraction(1, 2 ** 2000)), -2000 * math.log(2), places=8)


class TestDistances(unittest.TestCase):
    def test_rational_distances_are_exact(self):
        self.assertEqual(dist_to_integer(Rational(Fraction(1, 3)), 3), (Fraction(0), Fraction(0)))
        self.assertEqual(dist_to_integer(Rational(Fraction(1, 3)), 1), (Fraction(1, 3), Fraction(1, 3)))

    def test_sqrt2_distance_enclosure(self):
        lo, hi = dist_to_integer(SQRT2, 1)
        self.assertLessEqual(float(lo), math.sqrt(2) - 1 + 1e-15)
        self.assertGreaterEqual(float(hi), math.sqrt(2) - 1 - 1e-15)
        self.assertLess(hi - lo, Fraction(1, 2 ** 60))


class TestScans(unittest.TestCase):
    def test_rational_scan_counts_resonances(self):
        scan = sa_scan(_build_rational_pair(), 12)
        self.assertEqual(len(scan.rows), 12)
        self.assertEqual(scan.summary()['resonant_count'], 2)
        self.assertEqual([r.xi for r in scan.rows if r.m_lo == 0], [6, 12])

    def test_parallel_scan_matches_serial(self):
        serial = sa_scan([SQRT2], 64)
        parallel = sa_scan([SQRT2], 64, workers=3)
        self.assertEqual(serial.rows, parallel.rows)

    def test_scan_needs_two_frequencies(self):
        with self.assertRaises(SpecError):
            sa_scan([SQRT2], 1)

    def test_scan_frame_columns(self):
        frame = sa_scan(_build_rational_pair(), 6).to_frame()
        self.assertEqual(list(frame.columns), ['xi', 'm_xi_num', 'm_xi_den', 'exact'])
        self.assertEqual(frame['m_xi_num'].iloc[5], 0)


class TestClassifySA(unittest.TestCase):
    def test_sqrt2_is_not_approximable(self):
        verdict = classify_sa([SQRT2], 256)
        self.assertIs(verdict.status, DiophantineStatus.NOT_SA)
        self.assertEqual(verdict.bound.proof_tag, 'conjugate-product')
        self.assertEqual(verdict.bound.coordinate, 1)
        self.assertEqual(verdict.certificate()['status'], 'NotSA')

    def test_sqrt2_bound_covers_a_long_scan(self):
        verdict = classify_sa([SQRT2], 10 ** 4)
        self.assertIs(verdict.status, DiophantineStatus.NOT_SA)
        self.assertEqual(len(verdict.scan.rows), 10 ** 4)
        for row in verdict.scan.rows:
            self.assertGreaterEqual(row.m_lo * (1 + row.xi), verdict.bound.c)
            scaled = row.xi * math.sqrt(2)
            self.assertAlmostEqual(float(row.m_lo), abs(scaled - round(scaled)), delta=1e-9)

    def test_rationals_are_approximable(self):
        verdict = classify_sa(_build_rational_pair(), 32, depth=4)
        self.assertIs(verdict.status, DiophantineStatus.SA)
        self.assertEqual(len(verdict.witness), 4)
        self.assertEqual([e.xi for e in verdict.witness.entries], [6, 12, 36, 144])
        self.assertIn('rational-resonance', verdict.notes)

    def test_zero_witness(self):
        verdict = classify_sa([Rational(0)], 16, depth=4)
        self.assertEqual([e.xi for e in verdict.witness.entries], [2, 6, 24, 120])
        self.assertTrue(all(e.tau == (0,) for e in verdict.witness.entries))

    def test_liouville_is_approximable(self):
        verdict = classify_sa([FactorialLiouville(2, 4)], 64)
        self.assertIs(verdict.status, DiophantineStatus.SA)
        self.assertIn('factorial-partial-sums', verdict.notes)

    def test_float_values_stay_undetermined(self):
        verdict = classify_sa([FloatApprox(math.pi)], 64)
        self.assertIs(verdict.status, DiophantineStatus.UNDETERMINED)

    def test_tampered_witness_is_rejected(self):
        alphas = [Rational(Fraction(1, 2))]
        witness = classify_sa(alphas, 16, depth=3).witness
        first = witness.entries[0]
        tampered = WitnessSequence((WitnessEntry((first.tau[0] + 1,), first.xi, first.nu),)
                                   + witness.entries[1:])
        with self.assertRaises(WitnessInvalid):
            tampered.validate(alphas)


class TestLiouvilleTuple(unittest.TestCase):
    def test_single_liouville_witness(self):
        alphas, witness = liouville_tuple(1, 2, 4)
        self.assertEqual(len(alphas), 1)
        self.assertEqual([e.xi for e in witness.entries], [4, 64, 2 ** 24, 2 ** 120])
        witness.validate(alphas)

    def test_linked_tuple_offsets(self):
        alphas, witness = liouville_tuple(2, 2, 3)
        self.assertEqual(alphas[1].offset, Fraction(1, 2))
        self.assertGreaterEqual(len(witness), 3)

    def test_depth_below_three(self):
        with self.assertRaises(DepthTooSmall):
            liouville_tuple(1, 2, 2)


class TestSolvabilityCondition(unittest.TestCase):
    def test_rationals_hold_with_lattice_gamma(self):
        verdict = gs_condition_check(_build_rational_pair(), 64)
        self.assertIs(verdict.status, DiophantineStatus.HOLDS)
        self.assertEqual(verdict.bound.c, Fraction(1, 6))
        self.assertEqual(verdict.gamma['xi_period'], 6)

    def test_xi_zero_stratum_changes_the_checked_set(self):
        with_zero = gs_condition_check([SQRT2], 128, include_xi_zero=True)
        without_zero = gs_condition_check([SQRT2], 128, include_xi_zero=False)
        self.assertIs(with_zero.status, DiophantineStatus.HOLDS)
        self.assertIs(without_zero.status, with_zero.status)
        self.assertIn('xi-zero-excluded', without_zero.notes)
        self.assertEqual(with_zero.strata, ('xi=0', 'xi!=0'))
        self.assertEqual(without_zero.strata, ('xi!=0',))
        self.assertEqual(with_zero.certificate()['strata'], ['xi=0', 'xi!=0'])
        self.assertLessEqual(with_zero.bound.c, 1)

    def test_integer_constants_keep_the_unit_bound_on_both_strata(self):
        for include in (True, False):
            verdict = gs_condition_check([Rational(Fraction(0)), Rational(Fraction(2))], 32, include_xi_zero=include)
            self.assertEqual(verdict.bound.c, Fraction(1))

    def test_liouville_fails(self):
        verdict = gs_condition_check([FactorialLiouville(2, 4)], 64)
        self.assertIs(verdict.status, DiophantineStatus.FAILS)
        self.assertIsNotNone(verdict.witness)


class TestExponentialBound(unittest.TestCase):
    def test_known_rational_cases(self):
        half = exp_lower_bound_check(Rational(Fraction(1, 2)), 1, 0)
        self.assertFalse(half.hypothesis_holds)
        self.assertTrue(half.conclusion_holds)
        self.assertAlmostEqual(half.modulus, 2.0)

        third = exp_lower_bound_check(Rational(Fraction(1, 3)), 1, 2)
        self.assertTrue(third.hypothesis_holds)
        self.assertTrue(third.conclusion_holds)
        self.assertAlmostEqual(third.modulus, math.sqrt(3))

    def test_sqrt2_modulus(self):
        check = exp_lower_bound_check(SQRT2, 1, 2)
        self.assertTrue(check.hypothesis_holds)
        self.assertAlmostEqual(check.modulus, 2 * math.sin(math.pi * (math.sqrt(2) - 1)), places=9)

    def test_hypothesis_implies_conclusion(self):
        for q in range(1, 8):
            for p in range(q):
                alpha = Rational(Fraction(p, q))
                for xi in range(1, 21):
                    for ell in range(3):
                        check = exp_lower_bound_check(alpha, xi, ell)
                        if check.hypothesis_holds:
                            self.assertTrue(check.conclusion_holds)

    def test_random_hypothesis_implies_conclusion(self):
        rng = np.random.default_rng(20261018)
        for _ in range(10 ** 4):
            if rng.random() < 0.5:
                q = int(rng.integers(1, 1001))
                alpha = Rational(Fraction(int(rng.integers(0, q)), q))
            else:
                b = Fraction(int(rng.choice([-1, 1])) * int(rng.integers(1, 8)), int(rng.integers(1, 8)))
                alpha = QuadraticIrrational(Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 8))), b, 2)
            xi = int(rng.integers(1, 1001))
            ell = int(rng.integers(0, 5))
            check = exp_lower_bound_check(alpha, xi, ell)
            if check.hypothesis_holds:
                self.assertTrue(check.conclusion_holds, msg=f"alpha={alpha.to_dict()} xi={xi} ell={ell}")

    def test_xi_must_be_nonzero(self):
        with self.assertRaises(SpecError):
            exp_lower_bound_check(SQRT2, 0, 1)


if __name__ == '__main__':
    unittest.main()
