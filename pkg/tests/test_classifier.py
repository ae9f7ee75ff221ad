import unittest
from dataclasses import replace
from fractions import Fraction

from utils.classifier import (ALL_PROPERTIES, Classification, check_equivalence_closure, classify,
                              cross_validate, range_search)
from utils.coeffs import SystemSpec, TrigPoly
from utils.diophantine import DiophantineStatus, FactorialLiouville, FloatApprox, QuadraticIrrational, Rational
from utils.errors import InconsistentVerdict
from utils.generate_synthetic_data import axis_line_field
from utils.verdicts import Property, Status, exit_code

SQRT2 = QuadraticIrrational(Fraction(0), Fraction(1), 2)


def _build_finite_type_system():
    return SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (1, 0))))


def _statuses(result):
    return {p: result.status(p) for p in ALL_PROPERTIES}


class TestClassify(unittest.TestCase):
    def test_quadratic_irrational_holds_everywhere(self):
        result = classify(SystemSpec.constant([SQRT2]), xi_max=128)
        self.assertEqual(set(_statuses(result).values()), {Status.HOLDS})
        self.assertFalse(result.certificates['finite-type']['exists'])
        self.assertEqual(exit_code(_statuses(result).values()), 0)

    def test_rationals_fail_hypoellipticity_but_solve(self):
        result = classify(SystemSpec.constant([Rational(Fraction(1, 2)), Rational(Fraction(1, 3))]), xi_max=64)
        self.assertIs(result.status(Property.GH_X), Status.FAILS)
        self.assertIs(result.status(Property.GH_P), Status.FAILS)
        self.assertIs(result.status(Property.GH_X0), Status.FAILS)
        for prop in (Property.GS_X, Property.GS_P, Property.AGH_X, Property.AGH_P, Property.AGH_X0):
            self.assertIs(result.status(prop), Status.HOLDS)
        self.assertEqual(exit_code(_statuses(result).values()), 1)

    def test_liouville_fails_solvability(self):
        result = classify(SystemSpec.constant([FactorialLiouville(2, 4)]), xi_max=64)
        self.assertIs(result.status(Property.GH_X), Status.FAILS)
        self.assertIs(result.status(Property.GS_X), Status.FAILS)
        self.assertIs(result.status(Property.AGH_P), Status.FAILS)

    def test_finite_type_system(self):
        result = classify(_build_finite_type_system(), xi_max=32)
        self.assertEqual(set(_statuses(result).values()), {Status.HOLDS})
        self.assertEqual(result.verdicts[Property.GH_X].reasons[0].tag, 'finite-type-propagation')
        self.assertEqual(result.certificates['range-search']['kind'], 'grid-value')

    def test_reason_chain_for_averaged_system(self):
        result = classify(SystemSpec.constant([SQRT2]), xi_max=64)
        tags = [r.tag for r in result.verdicts[Property.GH_P].reasons]
        self.assertEqual(tags, ['averaged-system-equivalence', 'system-sum-equivalence'])
        doc = result.to_dict()
        self.assertEqual([v['property'] for v in doc['verdicts']], [p.value for p in ALL_PROPERTIES])

    def test_float_coefficients_stay_undetermined(self):
        result = classify(SystemSpec.constant([FloatApprox(0.7390851332)]), xi_max=64)
        self.assertIs(result.status(Property.GH_X), Status.UNDETERMINED)
        self.assertEqual(exit_code(_statuses(result).values()), 2)


class TestRangeSearch(unittest.TestCase):
    def test_intermediate_value_witness(self):
        sys = SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (2, 0))))
        search = range_search(sys)
        self.assertIs(search.status, DiophantineStatus.NOT_SA)
        self.assertEqual(search.coordinate, 2)
        self.assertEqual(search.certificate['kind'], 'intermediate-value')
        self.assertEqual(search.certificate['endpoints'], ['-1/1', '1/1'])

    def test_constant_system_is_inconclusive(self):
        self.assertIs(range_search(SystemSpec.constant([SQRT2])).status, DiophantineStatus.UNDETERMINED)

    def test_frequency_multiple_of_eight_is_not_aliased(self):
        sys = SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (8, 0))))
        search = range_search(sys)
        self.assertIs(search.status, DiophantineStatus.NOT_SA)
        self.assertEqual(search.certificate['kind'], 'intermediate-value')
        self.assertEqual(search.certificate['grid'], 'pythagorean')
        self.assertEqual(search.certificate['endpoints'][1], '1/1')

    def test_frequency_multiple_of_eight_classifies(self):
        result = classify(SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (8, 0)))), xi_max=64)
        self.assertIs(result.status(Property.GH_X0), Status.HOLDS)
        self.assertNotEqual(exit_code(_statuses(result).values()), 2)


class TestEquivalenceClosure(unittest.TestCase):
    def test_tampered_verdicts_are_rejected(self):
        result = classify(SystemSpec.constant([SQRT2]), xi_max=64)
        verdicts = dict(result.verdicts)
        verdicts[Property.GH_P] = replace(verdicts[Property.GH_P], status=Status.FAILS)
        with self.assertRaises(InconsistentVerdict):
            check_equivalence_closure(Classification(verdicts, result.certificates))

    def test_hypoellipticity_without_solvability(self):
        result = classify(SystemSpec.constant([SQRT2]), xi_max=64)
        verdicts = dict(result.verdicts)
        for prop in (Property.GS_X, Property.GS_P, Property.AGH_X, Property.AGH_P):
            verdicts[prop] = replace(verdicts[prop], status=Status.UNDETERMINED)
        with self.assertRaises(InconsistentVerdict):
            check_equivalence_closure(Classification(verdicts, result.certificates))


class TestCrossValidation(unittest.TestCase):
    def test_solver_round_trip(self):
        sys = SystemSpec.constant([SQRT2])
        report = cross_validate(sys, classify(sys, xi_max=64), xi_window=16, t_window=3, seed=1)
        self.assertEqual(report['checks'][0]['kind'], 'solve-round-trip')
        self.assertLess(report['checks'][0]['relative_error'], 1e-8)

    def test_x_only_kernel(self):
        sys = SystemSpec(2, (TrigPoly.zero(2), TrigPoly.zero(2)))
        report = cross_validate(sys, classify(sys, xi_max=32), xi_window=32, seed=1)
        self.assertEqual(report['checks'][0]['kind'], 'x-only-kernel')

    def test_rational_counterexample(self):
        sys = SystemSpec.constant([Rational(Fraction(1, 2)), Rational(Fraction(1, 3))])
        report = cross_validate(sys, classify(sys, xi_max=32), seed=1)
        self.assertEqual(report['checks'][0]['kind'], 'counterexample')

    def test_finite_type_propagation(self):
        sys = _build_finite_type_system()
        report = cross_validate(sys, classify(sys, xi_max=32), t_window=3, seed=1)
        check = report['checks'][0]
        self.assertEqual(check['kind'], 'propagation')
        self.assertEqual(check['verdict']['status'], 'Holds')

    def test_rough_field_fails_the_finite_type_check(self):
        # X_2 u = i xi cos(t_1) u^ grows with xi, so the right-hand side hypothesis cannot hold
        sys = SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (1, 0))))
        result = classify(sys, xi_max=32)
        self.assertIs(result.status(Property.GH_X), Status.HOLDS)
        with self.assertRaises(InconsistentVerdict):
            cross_validate(sys, result, seed=1, u=axis_line_field(2, 32, seed=1))


if __name__ == '__main__':
    unittest.main()
