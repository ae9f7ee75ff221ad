import math
import unittest
from fractions import Fraction

import numpy as np

from utils.coeffs import SystemSpec, TrigPoly
from utils.diophantine import QuadraticIrrational, Rational
from utils.errors import SpecError, WindowOverflow, WindowTooSmall
from utils.generate_synthetic_data import gaussian_taper_field
from utils.spectral import (ModeBlock, PartialFourierField, add_fields, apply_sum_of_squares, apply_system_field,
                            apply_vector_field, conjugate, diagonal_symbol, energy_identity_gaps, evaluate_at,
                            from_blocks, grid_frame, intertwining_residual, modulus_at, roundtrip_error,
                            sup_difference, synthesize)


def _build_cosine_system():
    return SystemSpec(1, (TrigPoly.cos(1, (1,)),), (Rational(Fraction(1, 3)),))


def _build_finite_type_system():
    return SystemSpec(2, (TrigPoly.zero(2), TrigPoly.cos(2, (1, 0))))


class TestFields(unittest.TestCase):
    def test_synthesize_real_field(self):
        u = synthesize(1, [((1,), 2, 1.0), ((-1,), -2, 1.0)], 4, 3)
        self.assertTrue(u.real_flag)
        self.assertAlmostEqual(u.l2_norm(), math.sqrt(2))
        self.assertEqual(u.xis, [-2, 2])

    def test_synthesize_outside_window(self):
        with self.assertRaises(WindowTooSmall):
            synthesize(1, [((0,), 9, 1.0)], 4, 3)
        with self.assertRaises(WindowTooSmall):
            synthesize(1, [((5,), 1, 1.0)], 4, 3)

    def test_dict_snapshot_keeps_coefficients(self):
        u = gaussian_taper_field(2, 3, 2, seed=7)
        back = PartialFourierField.from_dict(u.to_dict())
        self.assertEqual(back.xis, u.xis)
        self.assertAlmostEqual(sup_difference(u, back), 0.0, places=14)

    def test_add_fields_requires_equal_centres(self):
        u = from_blocks(1, {1: ModeBlock((0,), np.ones(3, dtype=complex))}, 2)
        v = from_blocks(1, {1: ModeBlock((4,), np.ones(3, dtype=complex))}, 2)
        with self.assertRaises(SpecError):
            add_fields(u, v)

    def test_add_fields_pads_widths(self):
        u = from_blocks(1, {1: ModeBlock((0,), np.ones(1, dtype=complex))}, 2)
        v = from_blocks(1, {1: ModeBlock((0,), np.ones(5, dtype=complex))}, 2)
        total = add_fields(u, v, -1.0)
        np.testing.assert_allclose(total.modes[1].coeffs, [-1, -1, 0, -1, -1])

    def test_roundtrip_error_is_tiny(self):
        self.assertLess(roundtrip_error(gaussian_taper_field(2, 4, 5, seed=3)), 1e-12)

    def test_evaluate_at_includes_centre_phase(self):
        u = from_blocks(1, {2: ModeBlock((5,), np.ones(1, dtype=complex))}, 2)
        value = evaluate_at(u, 2, (0.3,))
        self.assertAlmostEqual(value, complex(math.cos(1.5), math.sin(1.5)))
        self.assertAlmostEqual(modulus_at(u, 2, (0.3,)), 1.0)

    def test_grid_frame_columns(self):
        frame = grid_frame(gaussian_taper_field(2, 2, 1, seed=1), 1)
        self.assertEqual(list(frame.columns), ['t_1', 't_2', 're', 'im', 'modulus'])
        self.assertEqual(len(frame), 9)


class TestOperators(unittest.TestCase):
    def test_constant_field_on_exponential(self):
        u = synthesize(1, [((2,), 3, 1.0)], 4, 3)
        sys = SystemSpec.constant([Rational(Fraction(1, 2))])
        v = apply_system_field(u, sys, 1)
        # (d/dt + i/2 d/dx) exp(i(2t + 3x)) = 3.5 i exp(i(2t + 3x))
        self.assertAlmostEqual(v.modes[3].coeffs[2 + 3], 3.5j)

    def test_varying_field_shifts_frequencies(self):
        u = synthesize(1, [((0,), 1, 1.0)], 2, 0)
        v = apply_vector_field(u, TrigPoly.cos(1, (1,)), 1)
        # i cos(t) exp(ix): i/2 at tau = +-1
        np.testing.assert_allclose(v.modes[1].coeffs, [0.5j, 0.0, 0.5j], atol=1e-15)

    def test_diagonal_symbol_uses_exact_values_for_large_frequencies(self):
        xi = 2 ** 30
        values = diagonal_symbol(Rational(Fraction(1, 2)), xi, [-(2 ** 29), 1 - 2 ** 29])
        np.testing.assert_allclose(values, [0.0, 1.0])

    def test_window_overflow(self):
        u = synthesize(1, [((0,), 1, 1.0)], 2, 0)
        with self.assertRaises(WindowOverflow):
            apply_vector_field(u, TrigPoly.cos(1, (600,)), 1)

    def test_sum_of_squares_on_exponential(self):
        sqrt2 = QuadraticIrrational(Fraction(0), Fraction(1), 2)
        sys = SystemSpec.constant([sqrt2, Rational(0)])
        u = synthesize(2, [((1, 2), 1, 1.0)], 2, 2)
        pu = apply_sum_of_squares(u, sys)
        expected = -((1 + math.sqrt(2)) ** 2 + 4)
        self.assertAlmostEqual(pu.modes[1].coeffs[3, 4].real, expected, places=12)


class TestConjugation(unittest.TestCase):
    def test_conjugation_preserves_moduli(self):
        A = TrigPoly.cos(1, (1,))
        u = gaussian_taper_field(1, 4, 4, seed=11)
        s = conjugate(u, A, 1)
        self.assertFalse(s.lossy)
        for xi in u.xis:
            for point in (0.0, 0.7, 2.9, 5.1):
                self.assertAlmostEqual(modulus_at(s, xi, (point,)), modulus_at(u, xi, (point,)), places=12)

    def test_inverse_conjugation_recovers_field(self):
        A = TrigPoly.cos(2, (1, 0)) + TrigPoly.sin(2, (1, 1), Fraction(1, 2))
        u = gaussian_taper_field(2, 3, 3, seed=5)
        back = conjugate(conjugate(u, A, 1), A, -1)
        self.assertLess(sup_difference(back, u), 1e-12)

    def test_sign_must_be_unit(self):
        with self.assertRaises(SpecError):
            conjugate(gaussian_taper_field(1, 2, 2), TrigPoly.cos(1, (1,)), 2)

    def test_intertwining_residual(self):
        u = gaussian_taper_field(1, 4, 4, seed=1)
        self.assertLess(intertwining_residual(u, _build_cosine_system(), 1), 1e-10)

    def test_energy_identity(self):
        for sys in (_build_cosine_system(), _build_finite_type_system()):
            for seed in range(20):
                with self.subTest(n=sys.n, seed=seed):
                    u = gaussian_taper_field(sys.n, 4, 3, seed=seed)
                    gaps = energy_identity_gaps(u, sys)
                    self.assertEqual(sorted(gaps), u.xis)
                    self.assertLess(max(gaps.values()), 1e-9)


if __name__ == '__main__':
    unittest.main()
