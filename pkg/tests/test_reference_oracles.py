import math
import sys
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np
from numpy.testing import assert_allclose
from scipy import special

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from thwaves import th_split
from thwaves.bessel_waves import x_term
from thwaves.errors import GridError, OracleRegimeError, ThwavesError
from thwaves.reference_oracles import (
    GaussianIC,
    bessel_series_oracle,
    dalembert_gaussian,
    dense_small_checks,
    gaussian_profile,
    hankel_shift,
    lower_shift,
    odd_parity_matrix,
    parity_matrix,
)
from thwaves.spectral_core import make_grid, wave_solution


_original_hankel_entry = th_split.hankel_component_entry


def _flipped_hankel_entry(n_points, k, m, n):
    return -_original_hankel_entry(n_points, k, m, n)


class GaussianTest(unittest.TestCase):
    def test_peak_value(self):
        grid = make_grid(301)
        u0 = gaussian_profile(grid)

        self.assertAlmostEqual(u0.values[grid.midpoint_index], 1 / (math.sqrt(2 * math.pi) * 0.05), delta=1e-12)
        self.assertLess(u0.values[0], 1e-80)

    def test_symmetric(self):
        values = gaussian_profile(make_grid(101)).values

        assert_allclose(values, values[::-1], atol=1e-12)

    def test_identities(self):
        grid = make_grid(101)
        values = gaussian_profile(grid).values
        w = np.where(np.arange(101) % 2 == 0, 1.0, -1.0)

        self.assertAlmostEqual(values.sum(), 50.0, delta=1e-9)
        self.assertLessEqual(abs(w @ values), 1e-9)

    def test_invalid_sigma(self):
        for sigma in (0.0, -0.1, math.nan):
            with self.assertRaises(ThwavesError) as ctx:
                GaussianIC(sigma=sigma)
            self.assertEqual(ctx.exception.code, "invalid_sigma")
        with self.assertRaises(ThwavesError):
            GaussianIC(center=0.2)


class DalembertTest(unittest.TestCase):
    def test_initial_time(self):
        grid = make_grid(301)

        assert_allclose(dalembert_gaussian(0.0, grid).values, gaussian_profile(grid).values, atol=1e-12)

    def test_two_half_peaks(self):
        grid = make_grid(401)
        values = dalembert_gaussian(0.5, grid).values
        peak = 0.5 / (math.sqrt(2 * math.pi) * 0.05)

        self.assertAlmostEqual(values[100], peak, delta=1e-12)
        self.assertAlmostEqual(values[300], peak, delta=1e-12)
        self.assertLess(values[200], 1e-20)

    def test_rejects_negative_time(self):
        with self.assertRaises(ThwavesError):
            dalembert_gaussian(-0.1, make_grid(11))

    def test_discretization_convergence(self):
        errors = []
        for n_points in (301, 1001):
            grid = make_grid(n_points)
            u0 = gaussian_profile(grid)
            errors.append(np.max(np.abs(wave_solution(0.5, u0).values - dalembert_gaussian(0.5, grid).values)))

        self.assertLess(errors[1], errors[0])


class SeriesOracleTest(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(bessel_series_oracle(0, 0.0, 30), 1.0)
        self.assertEqual(bessel_series_oracle(3, 0.0, 30), 0.0)
        self.assertAlmostEqual(bessel_series_oracle(2, 1.0, 30), special.jv(2, 1.0), delta=1e-15)
        self.assertAlmostEqual(bessel_series_oracle(0, 2.0), 0.2238907791412357, delta=1e-15)

    def test_agrees_with_scipy_in_regime(self):
        for x in (0.5, 3.0, 9.0, 15.0):
            for n in (0, 1, 10, 25, 40):
                self.assertAlmostEqual(bessel_series_oracle(n, x, 40), special.jv(n, x), delta=1e-13)

    def test_regime_enforced(self):
        for args in ((0, 16.0, 30), (41, 1.0, 30), (0, 1.0, 29), (-1, 1.0, 30), (0, -1.0, 30)):
            with self.assertRaises(OracleRegimeError) as ctx:
                bessel_series_oracle(*args)
            self.assertEqual(ctx.exception.code, "oracle_regime")


class ShiftMatrixTest(unittest.TestCase):
    def test_hankel_shift_positions(self):
        size = 4
        for l in range(1, 2 * size):
            matrix = hankel_shift(size, l)
            for m in range(1, size + 1):
                for n in range(1, size + 1):
                    self.assertEqual(matrix[m - 1, n - 1], 1.0 if m + n == l + 1 else 0.0)

    def test_lower_shift_action(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])

        assert_allclose(lower_shift(4, 1) @ values, [0.0, 1.0, 2.0, 3.0], atol=0)

    def test_parity_matrices(self):
        assert_allclose(parity_matrix(3), [[1, 0, 1], [0, 1, 0], [1, 0, 1]], atol=0)
        assert_allclose(odd_parity_matrix(3), [[0, 1, 0], [1, 0, 1], [0, 1, 0]], atol=0)
        assert_allclose(parity_matrix(4) + odd_parity_matrix(4), np.ones((4, 4)), atol=0)


class DenseChecksTest(unittest.TestCase):
    def test_all_sizes_pass(self):
        for n_points in (3, 11, 31, 101):
            report = dense_small_checks(n_points)
            self.assertTrue(report.passed, msg=[(c.name, c.max_abs_error) for c in report.failures()])
            self.assertEqual(report.n_points, n_points)

    def test_expected_check_names(self):
        names = [check.name for check in dense_small_checks(11).checks]

        self.assertIn("T_k + H_k = v_k v_k^T", names)
        self.assertIn("sum_k H_k = A/(N+1)", names)
        self.assertIn("F_{N-k} = J E_k, F_{N+k} = J E_k^T", names)
        self.assertIn("psi_l = (F_l + F_{2N-l}) u0", names)
        self.assertIn("A + B = e e^T", names)
        self.assertIn("(N+1) X = c_par A u0 + c_impar B u0", names)

    def test_corrupted_parity_detected(self):
        rng = np.random.default_rng(3)
        corrupted = rng.integers(0, 2, size=(11, 11)).astype(float)
        with patch("thwaves.reference_oracles.parity_matrix", return_value=corrupted):
            report = dense_small_checks(11)

        failed = {check.name for check in report.failures()}
        self.assertIn("A + B = e e^T", failed)
        self.assertIn("A - B = w w^T", failed)

    def test_shifted_x_term_detected(self):
        with patch("thwaves.reference_oracles.x_term", side_effect=lambda j, basis: x_term(j + 1, basis)):
            report = dense_small_checks(11)

        failed = {check.name for check in report.failures()}
        self.assertEqual(failed, {"(N+1) X = c_par A u0 + c_impar B u0"})

    def test_ceiling_enforced(self):
        with self.assertRaises(GridError):
            dense_small_checks(31, ceiling=11)

    def test_flipped_hankel_sign_detected(self):
        with patch("thwaves.th_split.hankel_component_entry", side_effect=_flipped_hankel_entry):
            report = dense_small_checks(11)

        self.assertFalse(report.passed)
        failed = {check.name for check in report.failures()}
        self.assertIn("T_k + H_k = v_k v_k^T", failed)
        self.assertIn("sum_k (T_k + H_k) = I", failed)
        worst = next(check for check in report.failures() if check.name == "T_k + H_k = v_k v_k^T")
        self.assertEqual(len(worst.location), 2)


if __name__ == "__main__":
    unittest.main()
