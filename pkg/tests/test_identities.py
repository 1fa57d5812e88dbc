"""Unit tests for named constants, identity reports and the identity checks."""

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from fractional.profiles import GridSpec, RadialProfile
from identities.checks import (CheckSettings, check_fuglede, check_intertwining,
                               check_semyanistyi, check_weighted_duality, invert_via_range,
                               standard_suite)
from identities.constants import constant, constant_names
from identities.reports import Verdict, build_report, fitted_ratio
from numerics.errors import DomainError
from radon.config import GrassmannConfig

FOUR = GrassmannConfig(4, 1, 1, 1)
SIX = GrassmannConfig(6, 1, 1, 1)
SETTINGS = CheckSettings(grid=GridSpec(1e-2, 100.0, 256), probes=(0.5, 1.0, 2.0))


class TestConstants(unittest.TestCase):
    """Test cases for the constant registry."""

    def test_known_values(self):
        """Test closed-form values of several constants."""
        self.assertAlmostEqual(constant('c1', SIX, lam=2.0), 4.0, places=12)
        self.assertAlmostEqual(constant('c3', SIX), 4.0 / 3.0, places=12)
        self.assertAlmostEqual(constant('tilde_c1', SIX), 2.0, places=12)
        self.assertAlmostEqual(constant('c_kn', n=2, k=1), 2.0, places=12)
        self.assertAlmostEqual(constant('fuglede_c', GrassmannConfig(4, 1, 1, 1)),
                               8.0 * math.pi, places=10)
        self.assertAlmostEqual(constant('sigma', d=3), 4.0 * math.pi, places=12)
        self.assertAlmostEqual(constant('riesz_ek', alpha=1.0), 0.5)

    def test_registry(self):
        """Test that every listed name resolves and the list is sorted."""
        names = constant_names()
        self.assertEqual(names, sorted(names))
        self.assertIn('semyanistyi_forwardside_alt', names)

    def test_errors(self):
        """Test unknown names, missing parameters and poles."""
        with self.assertRaises(DomainError):
            constant('c99', SIX)
        with self.assertRaises(DomainError) as ctx:
            constant('c1', SIX)
        self.assertIn('lam', str(ctx.exception), "Missing parameter should be named")
        with self.assertRaises(DomainError):
            # Γ((n-j-λ)/2) has a pole at λ = 4
            constant('c1', SIX, lam=4.0)


class TestReports(unittest.TestCase):
    """Test cases for report classification."""

    def test_pass(self):
        """Test that agreeing sides pass."""
        report = build_report('demo', {'n': 6}, [1.0, 2.0], [1.0, 2.0], [1.0, 2.0 + 1e-9],
                              1e-6)
        self.assertEqual(report.verdict, Verdict.PASS)
        self.assertTrue(report.passed)
        self.assertEqual(report.as_dict()['verdict'], 'pass')

    def test_constant_mismatch(self):
        """Test that a constant factor is separated from a failure."""
        report = build_report('demo', {'n': 6}, [1.0, 2.0], [2.0, 4.0], [1.0, 2.0], 1e-6,
                              constant_used=1.0,
                              constant_candidates={'registry': 1.0, 'alternative': 2.0})
        self.assertEqual(report.verdict, Verdict.CONSTANT_MISMATCH)
        self.assertAlmostEqual(report.fitted_constant_ratio, 2.0)
        self.assertEqual(report.matched_constant, 'alternative')

    def test_fail(self):
        """Test that a non-constant ratio fails."""
        report = build_report('demo', {'n': 6}, [1.0, 2.0], [1.0, 3.0], [1.0, 2.0], 1e-6)
        self.assertEqual(report.verdict, Verdict.FAIL)

    def test_fitted_ratio_of_zeros(self):
        """Test that two zero sides have ratio 1."""
        self.assertEqual(fitted_ratio(np.zeros(3), np.zeros(3)), 1.0)


class TestChecks(unittest.TestCase):
    """Test cases for the identity checks."""

    def test_weighted_duality_gaussian(self):
        """Test identities 2 and 4 on the Gaussian at (6, 1, 1, 1)."""
        g = RadialProfile.gaussian()
        report = check_weighted_duality(g, SIX, 2.5, 2)
        self.assertEqual(report.verdict, Verdict.PASS,
                         f"max deviation {report.max_rel_dev:.3e}")
        report = check_weighted_duality(g, SIX, None, 4)
        self.assertEqual(report.verdict, Verdict.PASS,
                         f"max deviation {report.max_rel_dev:.3e}")

    def test_weighted_duality_divergent_profile(self):
        """Test that a divergent pairing yields a failed report with errors."""
        report = check_weighted_duality(RadialProfile.power_law(2.0), SIX, 2.5, 2)
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertTrue(report.errors, "Failed report should carry the error")

    def test_weighted_duality_window(self):
        """Test the λ window and identity number checks."""
        g = RadialProfile.gaussian()
        with self.assertRaises(DomainError):
            check_weighted_duality(g, SIX, 5.0, 2)
        with self.assertRaises(DomainError):
            check_weighted_duality(g, SIX, None, 1)
        with self.assertRaises(DomainError):
            check_weighted_duality(g, SIX, 2.5, 5)

    def test_parameter_errors(self):
        """Test that parameter errors raise before any evaluation."""
        g = RadialProfile.gaussian()
        with self.assertRaises(DomainError):
            check_intertwining(g, SIX, 3.0)
        with self.assertRaises(DomainError):
            check_intertwining(g, SIX, 1.0, side='sideways')
        with self.assertRaises(DomainError):
            check_semyanistyi(g, SIX, 0.0, 'sideways')
        with self.assertRaises(DomainError):
            check_semyanistyi(g, SIX, -1.0, 'forwardside')
        with self.assertRaises(DomainError):
            check_fuglede(g, SIX, alpha=-1.0)
        with self.assertRaises(DomainError):
            check_fuglede(g, SIX, alpha=2.0, beta=1.0)

    def test_intertwining_gaussian(self):
        """Test the Riesz intertwining on the Gaussian at (6, 1, 1, 1)."""
        report = check_intertwining(RadialProfile.gaussian(), SIX, 1.5, SETTINGS)
        self.assertEqual(report.verdict, Verdict.PASS, f"max deviation {report.max_rel_dev:.3e}")

    def test_fuglede_gaussian(self):
        """Test the Fuglede-type formula on the Gaussian at (4, 1, 1, 1)."""
        report = check_fuglede(RadialProfile.gaussian(), FOUR, settings=SETTINGS)
        self.assertFalse(report.errors, f"{report.errors}")
        self.assertNotEqual(report.verdict, Verdict.FAIL,
                            f"max deviation {report.max_rel_dev:.3e}")

    def test_semyanistyi_relations(self):
        """Test both Semyanistyi relations on the Gaussian at (6, 1, 1, 1)."""
        g = RadialProfile.gaussian()
        for alpha, which in ((0.5, 'forwardside'), (0.0, 'forwardside'), (0.0, 'dualside')):
            report = check_semyanistyi(g, SIX, alpha, which, SETTINGS)
            self.assertFalse(report.errors, f"{which} at alpha={alpha}: {report.errors}")
            self.assertNotEqual(report.verdict, Verdict.FAIL,
                                f"{which} at alpha={alpha}: {report.max_rel_dev:.3e}")

    def test_invert_via_range(self):
        """Test recovery of R_j h through the transform and a Riesz derivative."""
        g = RadialProfile.gaussian()
        cases = [(g, SIX, 0.0, 'forward'), (g, SIX, 0.0, 'dual'), (g, SIX, 0.5, 'forward'),
                 (RadialProfile.generalized_cauchy(5.0), FOUR, 0.0, 'forward')]
        for h, cfg, alpha, side in cases:
            report = invert_via_range(h, cfg, alpha, SETTINGS, side=side)
            label = f"{h.label} {cfg} alpha={alpha} {side}"
            self.assertFalse(report.errors, f"{label}: {report.errors}")
            self.assertEqual(report.verdict, Verdict.PASS,
                             f"{label}: max deviation {report.max_rel_dev:.3e}")
        report = invert_via_range(g, SIX, 0.5, SETTINGS)
        self.assertEqual(report.parameters['order'], 3.5,
                         "the Riesz order takes alpha on the k-plane side")
        self.assertEqual(invert_via_range(g, SIX, 0.0, SETTINGS, side='dual').identity_name,
                         'invert-via-range-dual')

    def test_invert_via_range_parameters(self):
        """Test the side and order checks of the range inversion."""
        g = RadialProfile.gaussian()
        with self.assertRaises(DomainError):
            invert_via_range(g, SIX, side='sideways')
        with self.assertRaises(DomainError):
            invert_via_range(g, SIX, alpha=5.0)
        with self.assertRaises(DomainError):
            invert_via_range(g, SIX, alpha=-0.5)

    def test_standard_suite_subset(self):
        """Test a restricted power-law suite at (6, 1, 1, 1)."""
        reports = standard_suite(cfgs=[(6, 1, 1, 1)], profiles=['power-law'], settings=SETTINGS,
                                 only=['intertwining', 'fuglede'])
        self.assertEqual([r.identity_name for r in reports], ['intertwining-forward', 'fuglede'])
        for report in reports:
            self.assertNotEqual(report.verdict, Verdict.FAIL,
                                f"{report.identity_name}: {report.max_rel_dev:.3e} {report.errors}")
        with self.assertRaises(DomainError):
            standard_suite(cfgs=[(6, 1, 1, 1)], profiles=['lorentzian'], settings=SETTINGS)


if __name__ == '__main__':
    unittest.main()
