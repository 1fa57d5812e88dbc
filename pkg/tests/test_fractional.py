"""Unit tests for radial profiles, Erdélyi–Kober operators and Riesz potentials."""

import math
import os
import sys
import tempfile
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from fractional.erdelyi_kober import (derivative_branch, ek_derivative_minus,
                                      ek_derivative_plus, ek_minus, ek_minus_at_zero,
                                      ek_minus_profile, ek_plus, ek_plus_profile,
                                      left_inverse_deviation, semigroup_check)
from fractional.pipeline import trusted_interval
from fractional.profiles import (NEG_INF, FracOrder, GridSpec, ProfileKind, RadialProfile,
                                 ek_asymptotics_minus, ek_minus_head_is_log, estimate_exponents,
                                 read_grid_csv, roundoff_extent, tabulate, write_grid_csv)
from fractional.riesz import (RieszBackend, calibrate_riesz_constant, riesz_power_coefficient,
                              riesz_radial)
from numerics.errors import ConfigError, DivergenceError, DomainError

PROBES = np.array([0.5, 1.0, 2.0])


class TestFracOrder(unittest.TestCase):
    """Test cases for the α = m + α₀ split."""

    def test_split(self):
        """Test integer and fractional parts."""
        order = FracOrder(2.5)
        self.assertEqual(order.m, 2, "Integer part of 2.5 should be 2")
        self.assertAlmostEqual(order.alpha0, 0.5)
        self.assertTrue(order.is_half_odd, "2.5 is a half-odd order")
        self.assertTrue(FracOrder(1.0 + 1e-14).is_integer, "Near-integers snap to integers")
        self.assertEqual((FracOrder(0.5) + 0.5).alpha, 1.0)

    def test_rejects_nonpositive(self):
        """Test that orders must be positive."""
        with self.assertRaises(DomainError):
            FracOrder(0.0)
        with self.assertRaises(DomainError):
            FracOrder(float('inf'))

    def test_derivative_branch(self):
        """Test the representation chosen for each order."""
        self.assertEqual(derivative_branch(2.0), 'integer')
        self.assertEqual(derivative_branch(1.5), 'half-odd')
        self.assertEqual(derivative_branch(0.3), 'fractional')


class TestRadialProfile(unittest.TestCase):
    """Test cases for closed-form, grid and composite profiles."""

    def test_closed_forms(self):
        """Test evaluation of every closed-form kind."""
        self.assertAlmostEqual(RadialProfile.power_law(2.0)(2.0), 0.25)
        self.assertAlmostEqual(RadialProfile.gaussian(2.0)(2.0), math.exp(-1.0))
        self.assertAlmostEqual(RadialProfile.generalized_cauchy(2.0)(1.0), 0.5)
        self.assertAlmostEqual(RadialProfile.log_tempered_power(-1.0)(1.0),
                               1.0 / (3.0 * math.log(3.0)))
        self.assertAlmostEqual(RadialProfile.constant(3.0)(5.0), 3.0)
        self.assertTrue(RadialProfile.zero().is_zero, "zero profile should report is_zero")

    def test_exponents(self):
        """Test declared head and tail exponents."""
        f = RadialProfile.power_law(3.0)
        self.assertEqual((f.head_exponent, f.tail_exponent), (-3.0, -3.0))
        self.assertTrue(f.is_scale_free, "Power laws are homogeneous")
        g = RadialProfile.gaussian()
        self.assertTrue(g.decays_exponentially, "Gaussian tails decay exponentially")
        self.assertEqual(g.decay().kind, 'exponential')
        self.assertEqual(RadialProfile.generalized_cauchy(5.0).decay(1.0).exponent, 4.0)

    def test_times_power(self):
        """Test r^p · f for power laws and composites."""
        self.assertEqual(RadialProfile.power_law(3.0).times_power(1.0).params, (2.0,))
        weighted = RadialProfile.gaussian().times_power(2.0)
        self.assertEqual(weighted.kind, ProfileKind.COMPOSITE)
        self.assertAlmostEqual(weighted(1.5), 2.25 * math.exp(-2.25), places=14)
        self.assertEqual(weighted.head_exponent, 2.0)

    def test_grid_validation(self):
        """Test that malformed grids are rejected."""
        with self.assertRaises(DomainError):
            RadialProfile.from_grid([1.0, 0.5], [1.0, 2.0], 0.0, -2.0)
        with self.assertRaises(DomainError):
            RadialProfile.from_grid([1.0, 2.0], [1.0, float('nan')], 0.0, -2.0)
        with self.assertRaises(ConfigError):
            RadialProfile.from_grid([1.0, 2.0], [1.0, 2.0], 0.0, -2.0, interpolation='linear')

    def test_grid_extrapolation(self):
        """Test power-law extrapolation beyond the grid ends."""
        grid = RadialProfile.from_grid([1.0, 2.0, 4.0], [1.0, 0.25, 0.0625], -2.0, -2.0)
        self.assertAlmostEqual(grid(8.0), 1.0 / 64.0, places=14)
        self.assertAlmostEqual(grid(0.5), 4.0, places=14)
        self.assertAlmostEqual(grid(2.0), 0.25, places=14)

    def test_tabulate_gaussian(self):
        """Test that a tabulated Gaussian interpolates accurately."""
        tab = tabulate(RadialProfile.gaussian(), GridSpec(1e-2, 10.0, 400), workers=1)
        self.assertEqual(tab.kind, ProfileKind.GRID)
        np.testing.assert_allclose(tab(PROBES), np.exp(-PROBES ** 2), rtol=1e-4)
        self.assertEqual(tab(20.0), 0.0, "Exponential tails vanish past the grid")

    def test_grid_csv(self):
        """Test writing and reading the CSV grid format."""
        tab = tabulate(RadialProfile.power_law(2.0), GridSpec(0.1, 10.0, 16), workers=1)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'grid.csv')
            write_grid_csv(tab, path)
            with open(path) as handle:
                self.assertTrue(handle.readline().startswith('# kind=grid'),
                                "Grid files start with header lines")
            loaded = read_grid_csv(path)
        self.assertEqual(loaded.head_exponent, -2.0)
        self.assertEqual(loaded.tail_exponent, -2.0)
        np.testing.assert_allclose(loaded(tab.radii), tab.radii ** -2.0, rtol=1e-12)

    def test_grid_csv_requires_header(self):
        """Test that a grid file without exponents is rejected."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bare.csv')
            with open(path, 'w') as handle:
                handle.write("radius,value\n1,1\n2,0.5\n")
            with self.assertRaises(ConfigError):
                read_grid_csv(path)
        with self.assertRaises(DomainError):
            write_grid_csv(RadialProfile.gaussian(), 'unused.csv')

    def test_estimate_exponents(self):
        """Test end-slope fitting on a generalized Cauchy profile."""
        radii = np.geomspace(1e-3, 1e3, 200)
        head, tail = estimate_exponents(radii, (1.0 + radii ** 2) ** -1.5)
        self.assertAlmostEqual(head, 0.0, places=4)
        self.assertAlmostEqual(tail, -3.0, places=4)

    def test_roundoff_extent(self):
        """Test that a noisy Gaussian tail is cut where the noise starts."""
        radii = np.geomspace(1e-2, 1e2, 512)
        noise = 1e-12 * np.random.default_rng(3).standard_normal(radii.size)
        extent = roundoff_extent(radii, np.exp(-radii ** 2) + noise)
        self.assertLess(extent, radii.size)
        self.assertTrue(4.0 < radii[extent - 1] < 6.0,
                        f"cut at r = {radii[extent - 1]:.3g}, noise sets in near 5.3")
        self.assertEqual(roundoff_extent(radii, radii ** -3.0), radii.size,
                         "Power laws never reach the steep regime")

    def test_peak(self):
        """Test the size used to floor quadrature tolerances."""
        self.assertEqual(RadialProfile.gaussian(amplitude=-2.0).peak, 2.0)
        self.assertIsNone(RadialProfile.power_law(2.0).peak, "Power laws have no scale")
        self.assertIsNone(RadialProfile.generalized_cauchy(5.0).peak)
        self.assertEqual(RadialProfile.gaussian(amplitude=3.0).times_power(1.0).peak, 3.0)
        grid = RadialProfile.from_grid([1.0, 2.0, 3.0], [0.5, -4.0, 1.0], 0.0, NEG_INF)
        self.assertEqual(grid.peak, 4.0)
        self.assertEqual(grid.scaled(0.5).peak, 2.0)


class TestErdelyiKober(unittest.TestCase):
    """Test cases for I^α_{±,2} and their left inverses."""

    def test_plus_on_polynomials(self):
        """Test I^α_+ on 1 and r²."""
        t = PROBES
        np.testing.assert_allclose(ek_plus(RadialProfile.constant(), 1.0, t), t ** 2,
                                   rtol=1e-9)
        self.assertAlmostEqual(ek_plus(RadialProfile.constant(), 0.5, 1.0),
                               2.0 / math.sqrt(math.pi), places=9)
        np.testing.assert_allclose(ek_plus(RadialProfile.power_law(-2.0), 1.0, t),
                                   t ** 4 / 2.0, rtol=1e-9)

    def test_minus_gaussian_fixed_point(self):
        """Test I^α_- e^{-r²} = e^{-t²} for several orders."""
        g = RadialProfile.gaussian()
        for alpha in (0.5, 1.0, 1.5):
            np.testing.assert_allclose(ek_minus(g, alpha, PROBES), np.exp(-PROBES ** 2),
                                       rtol=1e-9, err_msg=f"fixed point at alpha={alpha}")
        self.assertAlmostEqual(ek_minus_at_zero(g, 1.5), 1.0, places=9)

    def test_minus_gaussian_far_tail(self):
        """Test that underflowing Gaussian tails converge to (almost) zero."""
        t = np.array([6.0, 10.0, 20.0])
        for alpha in (0.5, 1.0):
            np.testing.assert_allclose(ek_minus(RadialProfile.gaussian(), alpha, t),
                                       np.exp(-t ** 2), rtol=0.0, atol=1e-12)

    def test_logarithmic_head(self):
        """Test that head + 2α = 0 is flagged as a log(1/t) head."""
        self.assertTrue(ek_minus_head_is_log(-1.0, 0.5))
        self.assertFalse(ek_minus_head_is_log(-1.0, 1.0))
        self.assertFalse(ek_minus_head_is_log(-1.0, 0.5, homogeneous=True))
        self.assertEqual(ek_asymptotics_minus(-1.0, NEG_INF, 0.5), (0.0, NEG_INF))
        profile = ek_minus_profile(RadialProfile.gaussian().times_power(-1.0), 0.5)
        self.assertTrue(profile.metadata.get('log_head'), "log head should be recorded")
        self.assertGreater(profile(1e-6), profile(1e-3), "a log head grows towards 0")
        plain = ek_minus_profile(RadialProfile.gaussian().times_power(-1.0), 1.0)
        self.assertNotIn('log_head', plain.metadata)

    def test_minus_power_law(self):
        """Test I^1_- r^{-4} = t^{-2} and the divergent r^{-1}."""
        np.testing.assert_allclose(ek_minus(RadialProfile.power_law(4.0), 1.0, PROBES),
                                   PROBES ** -2.0, rtol=1e-9)
        with self.assertRaises(DivergenceError):
            ek_minus(RadialProfile.power_law(1.0), 1.0, 1.0)

    def test_plus_head_divergence(self):
        """Test that a head exponent <= -2 is rejected before quadrature."""
        with self.assertRaises(DivergenceError):
            ek_plus(RadialProfile.power_law(2.0), 1.0, 1.0)
        with self.assertRaises(DomainError):
            ek_plus(RadialProfile.constant(), 1.0, 0.0)

    def test_zero_profile(self):
        """Test that the zero profile maps to zero."""
        np.testing.assert_array_equal(ek_minus(RadialProfile.zero(), 0.5, PROBES), 0.0)
        self.assertTrue(ek_plus_profile(RadialProfile.zero(), 1.0).is_zero)

    def test_derivatives(self):
        """Test D^α_± against known inverses."""
        self.assertAlmostEqual(ek_derivative_plus(RadialProfile.power_law(-2.0), 1.0, 1.3),
                               1.0, places=7)
        np.testing.assert_allclose(
            ek_derivative_minus(RadialProfile.gaussian(), 1.0, PROBES),
            np.exp(-PROBES ** 2), rtol=1e-7)
        g = RadialProfile.gaussian()
        self.assertAlmostEqual(
            ek_derivative_plus(ek_plus_profile(g, 0.5), 0.5, 1.0) / math.exp(-1.0), 1.0,
            delta=1e-5)
        self.assertAlmostEqual(
            ek_derivative_minus(ek_minus_profile(g, 0.5), 0.5, 1.0) / math.exp(-1.0), 1.0,
            delta=1e-5)

    def test_semigroup(self):
        """Test I^a I^b = I^{a+b} on closed forms."""
        self.assertLessEqual(
            semigroup_check(RadialProfile.gaussian(), 0.5, 0.5, '-', PROBES), 1e-8)
        self.assertLessEqual(
            semigroup_check(RadialProfile.constant(), 1.0, 1.0, '+', PROBES), 1e-10)
        self.assertLessEqual(
            semigroup_check(RadialProfile.power_law(4.0), 0.5, 0.5, '-', PROBES), 1e-8)
        with self.assertRaises(DomainError):
            semigroup_check(RadialProfile.gaussian(), 0.5, 0.5, 0, PROBES)

    def test_left_inverse(self):
        """Test D^α I^α f = f on the Gaussian."""
        g = RadialProfile.gaussian()
        for sign in ('+', '-'):
            for order in (0.5, 1.0, 1.5, 2.0):
                deviation = left_inverse_deviation(g, order, sign, PROBES)
                self.assertLessEqual(deviation, 1e-5, f"left inverse {sign} at {order}")


class TestRiesz(unittest.TestCase):
    """Test cases for radial Riesz potentials."""

    def test_power_law_coefficient(self):
        """Test I^1_3 r^{-2} = (π/2) r^{-1} with both backends."""
        self.assertAlmostEqual(riesz_power_coefficient(1.0, 3, 2.0), math.pi / 2.0, places=12)
        f = RadialProfile.power_law(2.0)
        for backend in (RieszBackend.EK, RieszBackend.ANGULAR):
            np.testing.assert_allclose(riesz_radial(f, 1.0, 3, PROBES, backend),
                                       math.pi / 2.0 / PROBES, rtol=1e-6,
                                       err_msg=f"backend {backend.value}")

    def test_backends_agree(self):
        """Test the two backends on a Gaussian in the plane."""
        g = RadialProfile.gaussian()
        ek = riesz_radial(g, 1.0, 2, 1.0, 'ek-factorized')
        angular = riesz_radial(g, 1.0, 2, 1.0, 'angular-kernel')
        self.assertAlmostEqual(ek / angular, 1.0, delta=1e-6)

    def test_backends_agree_across_dimensions(self):
        """Test the two backends on a Gaussian for several (d, α)."""
        g = RadialProfile.gaussian()
        for d, alpha in ((3, 1.0), (4, 2.0), (5, 1.5)):
            ek = riesz_radial(g, alpha, d, PROBES, RieszBackend.EK)
            angular = riesz_radial(g, alpha, d, PROBES, RieszBackend.ANGULAR)
            np.testing.assert_allclose(ek, angular, rtol=1e-6,
                                       err_msg=f"backends differ at d={d}, alpha={alpha}")

    def test_calibration(self):
        """Test that the frozen EK constant matches the angular kernel."""
        calibration = calibrate_riesz_constant(1.0, 3)
        self.assertLess(calibration['relative_deviation'], 1e-6)
        self.assertAlmostEqual(calibration['frozen'], 0.5)

    def test_domain_and_divergence(self):
        """Test order range and tail checks."""
        with self.assertRaises(DomainError):
            riesz_radial(RadialProfile.gaussian(), 3.0, 3, 1.0)
        with self.assertRaises(DivergenceError):
            riesz_radial(RadialProfile.power_law(0.5), 1.0, 3, 1.0)
        with self.assertRaises(DomainError):
            RieszBackend.of('fourier')


class TestPipeline(unittest.TestCase):
    """Test cases for the inversion pipeline helpers."""

    def test_trusted_interval(self):
        """Test that the trusted interval lies inside the grid."""
        grid = GridSpec(1e-2, 1e2, 128)
        lo, hi = trusted_interval(grid, 0.5, 1.5, 1e-10)
        self.assertTrue(grid.t_min < lo < hi < grid.t_max, "Interval should be interior")


if __name__ == '__main__':
    unittest.main()
