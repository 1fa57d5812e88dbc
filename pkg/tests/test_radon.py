"""Unit tests for Grassmann configurations, existence and the radial transforms."""

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from fractional.profiles import GridSpec, RadialProfile
from numerics.errors import DivergenceError, DomainError
from radon.config import ExistenceMethod, GrassmannConfig
from radon.existence import (check_existence, counterexample_exponent, lp_existence_bound,
                             sharpness_probe)
from radon.inversion import strichartz_invert_radial
from radon.transforms import (consistency_audit, dual_kplane_radial, inclusion_radial,
                              kplane_radial, normalization_direct, normalization_factorized,
                              strichartz_dual_radial, strichartz_forward_profile,
                              strichartz_forward_radial)

PROBES = np.array([0.5, 1.0, 2.0])
SIX = GrassmannConfig(6, 1, 1, 1)


class TestGrassmannConfig(unittest.TestCase):
    """Test cases for dimension bookkeeping."""

    def test_derived_dimensions(self):
        """Test j, k and ℓ for (7, 1, 2, 1)."""
        cfg = GrassmannConfig(7, 1, 2, 1)
        self.assertEqual((cfg.j, cfg.k, cfg.ell), (3, 2, 3))
        swapped = cfg.swapped()
        self.assertEqual((swapped.q, swapped.l), (1, 2), "swap exchanges q and l")
        self.assertIsNone(cfg.special_case)

    def test_strict_mode_rejects_zero(self):
        """Test that zeros need special mode."""
        with self.assertRaises(DomainError):
            GrassmannConfig(5, 0, 1, 1)
        self.assertEqual(GrassmannConfig.create(5, 0, 1, 1).special_case, 'gonzalez')
        self.assertEqual(GrassmannConfig.create(5, 1, 0, 1).special_case, 'inclusion')
        self.assertEqual(GrassmannConfig.create(5, 1, 1, 0).special_case, 'dual-inclusion')

    def test_invalid_dimensions(self):
        """Test the n >= 2 and p+q+l < n constraints."""
        with self.assertRaises(DomainError):
            GrassmannConfig(1, 0, 0, 0, 'special')
        with self.assertRaises(DomainError):
            GrassmannConfig(4, 1, 2, 1)
        with self.assertRaises(DomainError):
            GrassmannConfig(6, 0, 0, 1, 'special')
        with self.assertRaises(DomainError):
            GrassmannConfig(6, 1, 1, 1, 'loose')

    def test_normalizations(self):
        """Test c̃₁ = 2 and c₁ = 8/π at (6, 1, 1, 1)."""
        self.assertAlmostEqual(normalization_factorized(SIX), 2.0, places=12)
        self.assertAlmostEqual(normalization_direct(SIX), 8.0 / math.pi, places=12)


class TestExistence(unittest.TestCase):
    """Test cases for existence conditions and L^p bounds."""

    def test_power_law_window(self):
        """Test head and tail conditions for power laws at (6, 1, 1, 1)."""
        verdict = check_existence(RadialProfile.power_law(2.0), SIX)
        self.assertTrue(verdict.ok, "r^-2 should be admissible")
        self.assertEqual(verdict.method, ExistenceMethod.ANALYTIC)
        slow = check_existence(RadialProfile.power_law(1.0), SIX)
        self.assertTrue(slow.head_ok)
        self.assertFalse(slow.tail_ok, "r^-1 decays too slowly")
        steep = check_existence(RadialProfile.power_law(5.0), SIX)
        self.assertFalse(steep.head_ok, "r^-5 is too singular at 0")
        self.assertTrue(steep.messages, "Failures should carry messages")

    def test_gaussian_and_zero(self):
        """Test that rapidly decaying and zero profiles always exist."""
        self.assertTrue(check_existence(RadialProfile.gaussian(), SIX, 'dual').ok)
        self.assertTrue(check_existence(RadialProfile.zero(), SIX).ok)
        with self.assertRaises(DomainError):
            check_existence(RadialProfile.gaussian(), SIX, 'sideways')

    def test_lp_bounds(self):
        """Test (n-j)/l and (n-k)/q."""
        self.assertEqual(lp_existence_bound(SIX), 4.0)
        self.assertEqual(lp_existence_bound(SIX, 'dual'), 4.0)
        cfg = GrassmannConfig(7, 1, 2, 1)
        self.assertEqual(lp_existence_bound(cfg), 4.0)
        self.assertEqual(lp_existence_bound(cfg, 'dual'), 2.5)
        with self.assertRaises(DomainError):
            lp_existence_bound(GrassmannConfig.create(5, 1, 1, 0))

    def test_counterexample_exponent(self):
        """Test e = (j-n)/s."""
        self.assertAlmostEqual(counterexample_exponent(SIX, 2.0), -2.0)
        with self.assertRaises(DomainError):
            counterexample_exponent(SIX, 0.0)

    def test_sharpness(self):
        """Test that the probe diverges at the bound and converges below it."""
        cutoffs = [1e6, 1e300]
        divergent = sharpness_probe(SIX, 4.0, cutoffs)
        self.assertGreater(divergent[1] - divergent[0], 3.0,
                           "At the bound the tail grows like log log")
        convergent = sharpness_probe(SIX, 2.0, cutoffs)
        self.assertLess(convergent[1] - convergent[0], 1e-6)
        with self.assertRaises(DomainError):
            sharpness_probe(SIX, 2.0, [10.0, 5.0])


class TestTransforms(unittest.TestCase):
    """Test cases for the Strichartz, inclusion and k-plane transforms."""

    def test_forward_power_law(self):
        """Test R r^-2 = 4/s at (6, 1, 1, 1)."""
        values = strichartz_forward_radial(RadialProfile.power_law(2.0), SIX, PROBES)
        np.testing.assert_allclose(values, 4.0 / PROBES, rtol=1e-6)

    def test_dual_power_law(self):
        """Test the dual transform on the symmetric configuration."""
        values = strichartz_dual_radial(RadialProfile.power_law(2.0), SIX, PROBES)
        np.testing.assert_allclose(values, 4.0 / PROBES, rtol=1e-4)

    def test_forward_generalized_cauchy(self):
        """Test R (1+r²)^{-5/2} = (4/3)(1+s²)^{-3/2}."""
        values = strichartz_forward_radial(RadialProfile.generalized_cauchy(5.0), SIX, PROBES)
        np.testing.assert_allclose(values, (4.0 / 3.0) * (1.0 + PROBES ** 2) ** -1.5,
                                   rtol=1e-4)

    def test_forward_rejects_divergent(self):
        """Test that existence is checked before quadrature."""
        with self.assertRaises(DivergenceError):
            strichartz_forward_radial(RadialProfile.power_law(1.0), SIX, 1.0)

    def test_forward_zero(self):
        """Test that the zero profile maps to zero."""
        np.testing.assert_array_equal(
            strichartz_forward_radial(RadialProfile.zero(), SIX, PROBES), 0.0)

    def test_inclusion_and_kplane(self):
        """Test Gaussian values of the inclusion and k-plane transforms."""
        g = RadialProfile.gaussian()
        s = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(inclusion_radial(g, 0, 2, 4, s), math.pi * np.exp(-s ** 2),
                                   rtol=1e-6)
        np.testing.assert_allclose(kplane_radial(g, 5, 3, PROBES),
                                   math.pi ** 1.5 * np.exp(-PROBES ** 2), rtol=1e-6)
        with self.assertRaises(DomainError):
            inclusion_radial(g, 2, 2, 4, 1.0)

    def test_dual_kplane_preserves_constants(self):
        """Test R_k^* 1 = 1."""
        np.testing.assert_allclose(dual_kplane_radial(RadialProfile.constant(), 5, 2, PROBES),
                                   1.0, rtol=1e-6)

    def test_consistency_audit(self):
        """Test that the factorized and direct routes agree on a Gaussian."""
        audit = consistency_audit(SIX, RadialProfile.gaussian(), PROBES)
        self.assertAlmostEqual(audit['constant_ratio'], 1.0, places=10)
        self.assertTrue(audit['consistent'],
                        f"Routes disagree: {audit['max_relative_deviation']:.3e}")


class TestInversion(unittest.TestCase):
    """Test cases for the derivative chain inverse."""

    def test_invert_power_law(self):
        """Test that 4/s inverts to r^-2 at (6, 1, 1, 1)."""
        phi = RadialProfile.power_law(1.0, amplitude=4.0)
        recovered = strichartz_invert_radial(phi, SIX, PROBES, grid=GridSpec(1e-2, 1e2, 256),
                                             workers=1)
        values = np.array(recovered.metadata['values'])
        np.testing.assert_allclose(values, PROBES ** -2.0, rtol=1e-2)
        self.assertFalse(recovered.metadata['errors'], "No radius should fail")

    def test_invert_gaussian(self):
        """Test Gaussian round trips out to e^-9 on three configurations."""
        g = RadialProfile.gaussian()
        t = np.array([0.2, 0.5, 1.0, 2.0, 3.0])
        for cfg in (GrassmannConfig(4, 1, 1, 1), SIX, GrassmannConfig(7, 1, 2, 2)):
            recovered = strichartz_invert_radial(strichartz_forward_profile(g, cfg), cfg, t,
                                                 grid=GridSpec(1e-2, 1e2, 256), workers=1)
            self.assertFalse(recovered.metadata['errors'], f"{cfg}: no radius should fail")
            values = np.array(recovered.metadata['values'])
            self.assertTrue(np.all(np.isfinite(values)), f"{cfg}: {values}")
            np.testing.assert_allclose(values, np.exp(-t ** 2), rtol=1e-2, err_msg=str(cfg))


if __name__ == '__main__':
    unittest.main()
