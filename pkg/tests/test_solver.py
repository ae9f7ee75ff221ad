import math
import unittest
from fractions import Fraction

from config_manager import config
from utils.coeffs import SystemSpec, TrigPoly, exact_form, finite_type_exists
from utils.diophantine import QuadraticIrrational, Rational, liouville_tuple
from utils.errors import DivisorTooSmall, HypothesisFailed, Resonance, SpecError
from utils.generate_synthetic_data import axis_line_field, gaussian_taper_field
from utils.solver import (PropagationInput, build_counterexample, decay_report, derivative_closure_check,
                          growth_bound_check, is_resonant, mode_divisor, propagation_check, sobolev_norm,
                          solve_mode, solve_system)
from utils.spectral import apply_system_field, sup_difference, synthesize
from utils.verdicts import Status

SQRT2 = QuadraticIrrational(Fraction(0), Fraction(1), 2)


def _build_finite_type_system():
    return SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (1, 0))))


def _build_rhs(u, sys):
    return [apply_system_field(u, sys, j) for j in range(1, sys.n + 1)]


class TestSmallDivisors(unittest.TestCase):
    def test_rational_resonance(self):
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        self.assertTrue(is_resonant(sys, 1, 2))
        self.assertFalse(is_resonant(sys, 1, 3))
        self.assertTrue(is_resonant(sys, 1, 0))

    def test_divisor_values(self):
        sys = SystemSpec.constant([Rational(Fraction(1, 3))])
        self.assertAlmostEqual(mode_divisor(sys, 1, 1), math.sqrt(3))
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        self.assertAlmostEqual(mode_divisor(sys, 1, 1), 2.0)

    def test_quadratic_divisor(self):
        sys = SystemSpec.constant([SQRT2])
        expected = 2 * math.sin(math.pi * (5 * math.sqrt(2) - 7))
        self.assertAlmostEqual(mode_divisor(sys, 1, 5), expected, places=9)


class TestSolveSystem(unittest.TestCase):
    def test_manufactured_constant_system(self):
        sys = SystemSpec.constant([SQRT2])
        u0 = gaussian_taper_field(1, 8, 4, seed=3, include_zero=False)
        u, report = solve_system(_build_rhs(u0, sys), sys)
        self.assertEqual(report.obstructions, ())
        self.assertEqual(set(report.chosen.values()), {1})
        self.assertLess(sup_difference(u, u0), 1e-8)
        self.assertLess(report.to_dict()['max_residual'], 1e-8)

    def test_manufactured_varying_system(self):
        sys = SystemSpec(2, exact_form(2, TrigPoly.cos(2, (1, 1))).coefficients, (SQRT2, Rational(0)))
        u0 = gaussian_taper_field(2, 6, 3, seed=4, include_zero=False)
        u, report = solve_system(_build_rhs(u0, sys), sys)
        self.assertEqual(report.obstructions, ())
        # the second averaged coefficient is zero, so every mode goes through X_1
        self.assertEqual(set(report.chosen.values()), {1})
        self.assertLess(sup_difference(u, u0), 1e-8)
        self.assertLess(report.compatibility_defect, 1e-9)

    def test_resonant_modes_are_reported(self):
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        u0 = gaussian_taper_field(1, 8, 4, seed=5, include_zero=False)
        u, report = solve_system(_build_rhs(u0, sys), sys)
        self.assertEqual([o.xi for o in report.obstructions], [-8, -6, -4, -2, 2, 4, 6, 8])
        self.assertTrue(all(o.reason == 'resonance' for o in report.obstructions))
        self.assertEqual(sorted(report.chosen), [-7, -5, -3, -1, 1, 3, 5, 7])
        self.assertEqual(u.xis, [-7, -5, -3, -1, 1, 3, 5, 7])

    def test_wrong_rhs_count(self):
        sys = _build_finite_type_system()
        with self.assertRaises(SpecError):
            solve_system([gaussian_taper_field(2, 2, 2)], sys)

    def test_solve_mode_raises_on_resonance(self):
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        f = gaussian_taper_field(1, 4, 2, seed=1)
        with self.assertRaises(Resonance) as ctx:
            solve_mode(f, sys, 1, 2)
        self.assertEqual(ctx.exception.xi, 2)

    def test_solve_mode_respects_divisor_floor(self):
        sys = SystemSpec.constant([SQRT2])
        f = gaussian_taper_field(1, 8, 2, seed=1)
        with config.overrides({'solver.divisor_floor': 0.5}):
            with self.assertRaises(DivisorTooSmall):
                solve_mode(f, sys, 1, 5)
        self.assertGreater(solve_mode(f, sys, 1, 5).divisor, 0.4)

    def test_constant_mode_divides_by_the_symbol(self):
        # X (e^{i(t + x)}) = i (1 + 1/2) e^{i(t + x)} for a = 1/2
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        f = synthesize(1, [((1,), 1, 1.5j)], 2, 2)
        solution = solve_mode(f, sys, 1, 1)
        block = solution.block
        index = 1 - block.center[0] + block.width
        self.assertAlmostEqual(complex(block.coeffs[index]), 1.0 + 0j)
        self.assertAlmostEqual(float(abs(block.coeffs).sum()), 1.0)
        self.assertAlmostEqual(solution.divisor, 2.0)
        self.assertLess(solution.residual, 1e-12)


class TestDecayReport(unittest.TestCase):
    def test_gaussian_modes_decay_rapidly(self):
        u = gaussian_taper_field(1, 32, 3, sigma=1.0, seed=2)
        self.assertTrue(decay_report(u).is_rapid)

    def test_unit_modes_do_not_decay(self):
        report = decay_report(axis_line_field(1, 32, seed=2))
        self.assertFalse(report.is_rapid)
        self.assertAlmostEqual(report.fitted_exponent, 0.0)

    def test_mode_arguments(self):
        u = gaussian_taper_field(1, 8, 2)
        with self.assertRaises(SpecError):
            decay_report(u, mode='sideways')
        with self.assertRaises(SpecError):
            decay_report(u, mode='at_point')


class TestCounterexample(unittest.TestCase):
    def test_liouville_counterexample(self):
        alphas, witness = liouville_tuple(1, 2, 4)
        sys = SystemSpec.constant(alphas)
        u, report = build_counterexample(witness, sys, 4)
        self.assertEqual(len(report.levels), 4)
        self.assertEqual(u.xis, [e.xi for e in witness.entries])
        self.assertTrue(all(level.sup_u == 1.0 for level in report.levels))
        self.assertFalse(report.u_decay.is_rapid)
        self.assertGreaterEqual(report.x_decays[0].fitted_exponent, 3.0)
        for level in report.levels:
            self.assertLessEqual(level.log_x[0], level.log_bound)

    def test_counterexample_fails_propagation_hypotheses(self):
        alphas, witness = liouville_tuple(1, 2, 4)
        sys = SystemSpec.constant(alphas)
        u, _ = build_counterexample(witness, sys, 4)
        with self.assertRaises(HypothesisFailed) as ctx:
            propagation_check(PropagationInput(u, (0.0,), tuple(_build_rhs(u, sys)), sys), k=1)
        self.assertIn(ctx.exception.hypothesis, ('rhs', 'base_point'))


class TestPropagation(unittest.TestCase):
    def test_finite_type_propagation_holds(self):
        sys = _build_finite_type_system()
        u = gaussian_taper_field(2, 32, 3, sigma=0.5, seed=8, include_zero=False)
        inp = PropagationInput(u, (0.0, 0.0), tuple(_build_rhs(u, sys)), sys, finite_type_exists(sys))
        verdict = propagation_check(inp, 3)
        self.assertIs(verdict.status, Status.HOLDS)
        self.assertTrue(verdict.certificates['sweep']['bracket_base_point'])

    def test_inconsistent_rhs(self):
        sys = _build_finite_type_system()
        u = gaussian_taper_field(2, 32, 3, sigma=0.5, seed=8, include_zero=False)
        with self.assertRaises(HypothesisFailed) as ctx:
            propagation_check(PropagationInput(u, (0.0, 0.0), (u, u), sys), 3)
        self.assertEqual(ctx.exception.hypothesis, 'consistency')


class TestEstimates(unittest.TestCase):
    def test_derivative_closure(self):
        sys = _build_finite_type_system()
        u = gaussian_taper_field(2, 4, 2, seed=6, include_zero=False)
        result = derivative_closure_check(u, sys, _build_rhs(u, sys), max_order=2)
        self.assertTrue(result['holds'])
        self.assertEqual(sorted(result['max_ratio_by_order']), ['1', '2'])

    def test_sobolev_norm_of_exponential(self):
        u = synthesize(1, [((2,), 3, 1.0)], 4, 3)
        self.assertAlmostEqual(sobolev_norm(u, 1.0), 1.0 + math.sqrt(13))
        self.assertAlmostEqual(sobolev_norm(u, 0.0), 1.0)

    def test_growth_bound(self):
        result = growth_bound_check(gaussian_taper_field(1, 8, 3, seed=9), 1.0)
        self.assertTrue(result['holds'])
        self.assertEqual(result['exponent'], 4.0)


if __name__ == '__main__':
    unittest.main()
