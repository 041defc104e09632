import math
import unittest

import numpy as np

from src.common.config import plugin_config
from src.common.utils import ConfigError
from src.plugins.field import (GaussianField, NonconvexField, RegionSpec, SmoothedPowerLawField,
                               locate_maximizer, region_bounds)


class TestRegionSpec(unittest.TestCase):
    def test_box_and_annulus_grids(self):
        box = RegionSpec(kind='box', lo=[0, 0], hi=[1, 2])
        self.assertEqual(box.grid(5).shape, (25, 2))
        self.assertTrue(np.all(box.contains(box.grid(5))))
        annulus = RegionSpec(kind='annulus', center=[1, 1], inner=2, outer=3)
        points = annulus.grid(4)
        self.assertEqual(points.shape, (4 * 8, 2))
        self.assertTrue(np.all(annulus.contains(points)))
        shell = RegionSpec(kind='annulus', center=[0, 0, 0], inner=1, outer=2)
        self.assertTrue(np.all(shell.contains(shell.grid(3))))

    def test_invalid_regions(self):
        with self.assertRaises(ValueError):
            RegionSpec(kind='box', lo=[0, 0], hi=[1])
        with self.assertRaises(ValueError):
            RegionSpec(kind='annulus', center=[0, 0], inner=3, outer=2)
        with self.assertRaises(ConfigError):
            RegionSpec(kind='box', lo=[0, 0], hi=[1, 1]).grid(1)


class TestRegionBounds(unittest.TestCase):
    def test_single_radius_annulus(self):
        field = GaussianField(1.0, [0.0, 0.0], np.eye(2))
        region = RegionSpec(kind='annulus', center=[0, 0], inner=1, outer=1)
        bounds = region_bounds(field, region, 16)
        self.assertAlmostEqual(bounds.k_min, 2 * math.exp(-1), places=12)
        self.assertAlmostEqual(bounds.k_max, 2 * math.exp(-1), places=12)
        self.assertFalse(bounds.contains_source)
        self.assertLessEqual(bounds.refinement_change, 1e-12)

    def test_singleton_region(self):
        field = SmoothedPowerLawField(10.0, [1.0, 2.0])
        a = [3.0, -1.0]
        bounds = region_bounds(field, {'kind': 'box', 'lo': a, 'hi': a}, 4)
        expected = np.linalg.norm(field.gradient(a))
        self.assertAlmostEqual(bounds.k_min, expected, places=12)
        self.assertAlmostEqual(bounds.k_max, expected, places=12)
        self.assertAlmostEqual(bounds.m_bound,
                               np.abs(np.linalg.eigvalsh(field.hessian(a))).max() / 2, places=12)

    def test_region_with_source_forces_zero(self):
        field = GaussianField(1.0, [0.0, 0.0], np.eye(2))
        region = RegionSpec(kind='annulus', center=[0, 0], inner=0, outer=2)
        bounds = region_bounds(field, region, 9)
        self.assertTrue(bounds.contains_source)
        self.assertEqual(bounds.k_min, 0.0)
        self.assertTrue(any('source' in w for w in bounds.warnings))

    def test_nonconvex_annulus_against_dense_sampling(self):
        field = NonconvexField()
        region = RegionSpec(kind='annulus', center=[40, 40], inner=5, outer=15)
        bounds = region_bounds(field, region, 200)

        radii = np.linspace(5, 15, 400)
        phi = np.linspace(0, 2 * np.pi, 800, endpoint=False)
        r, p = np.meshgrid(radii, phi, indexing='ij')
        points = np.array([40.0, 40.0]) + np.stack([r * np.cos(p), r * np.sin(p)], axis=-1)
        norms = np.linalg.norm(field.gradients(points), axis=-1)
        spectral = np.abs(np.linalg.eigvalsh(field.hessians(points))).max(axis=-1)

        tol = plugin_config.refinement_tolerance
        self.assertLess(bounds.refinement_change, tol)
        self.assertAlmostEqual(bounds.k_min / norms.min(), 1.0, delta=tol)
        self.assertAlmostEqual(bounds.k_max / norms.max(), 1.0, delta=tol)
        self.assertAlmostEqual(bounds.m_bound / (spectral.max() / 2), 1.0, delta=tol)

    def test_samples_within_conservative_bounds(self):
        field = GaussianField(2.0, [0.0, 0.0], [[0.03, 0.01], [0.01, 0.02]])
        region = RegionSpec(kind='annulus', center=[0, 0], inner=3, outer=9)
        bounds = region_bounds(field, region, 48).conservative()
        rng = np.random.default_rng(3)
        r = rng.uniform(3, 9, 5000)
        phi = rng.uniform(0, 2 * np.pi, 5000)
        points = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
        norms = np.linalg.norm(field.gradients(points), axis=-1)
        self.assertTrue(np.all(norms >= bounds.k_min))
        self.assertTrue(np.all(norms <= bounds.k_max))

    def test_taylor_remainder(self):
        field = GaussianField(1.5, [0.0, 0.0], [[0.05, 0.02], [0.02, 0.08]])
        region = RegionSpec(kind='box', lo=[-6, -6], hi=[6, 6])
        M = region_bounds(field, region, 40).conservative().m_bound
        rng = np.random.default_rng(5)
        D = 1.0
        for _ in range(1000):
            a = rng.uniform(-5, 5, 2)
            step = rng.normal(size=2)
            b = a + rng.uniform(0, D) * step / np.linalg.norm(step)
            remainder = abs(field.eval(a) - field.eval(b) - field.gradient(a) @ (a - b))
            self.assertLessEqual(remainder, M * np.sum((a - b) ** 2) + 1e-15)


class TestLocateMaximizer(unittest.TestCase):
    def test_gaussian_maximizer_is_center(self):
        field = GaussianField(1.0, [1.0, -2.0], [[0.2, 0.05], [0.05, 0.1]])
        report = locate_maximizer(field, [-10, -10], [10, 10])
        self.assertFalse(report.on_boundary)
        self.assertLess(report.offset, 1e-5)
        self.assertLess(report.gradient_norm, 1e-6)

    def test_nonconvex_literal_signal_peaks_on_boundary(self):
        field = NonconvexField()
        report = locate_maximizer(field, [0, 0], [80, 80])
        self.assertTrue(report.on_boundary)
        self.assertGreater(report.value, field.eval(field.source))
        self.assertGreater(report.offset, 1.0)
