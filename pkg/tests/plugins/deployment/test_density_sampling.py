import unittest

import numpy as np

from src.common.utils import ConfigError, SamplingError
from src.plugins.deployment import (DensitySpec, ShapeSpec, moments, sample_density,
                                    sample_positions)


class TestShapeSpec(unittest.TestCase):
    def test_polygon_membership(self):
        square = ShapeSpec(kind='polygon', vertices=[[-1, -1], [1, -1], [1, 1], [-1, 1]])
        X = np.array([0.0, 0.9, 1.1, -0.5])
        Y = np.array([0.0, -0.9, 0.0, 2.0])
        self.assertEqual(square.contains(X, Y).tolist(), [True, True, False, False])
        self.assertEqual(square.bounding_box(), (-1, 1, -1, 1))

    def test_custom_inequalities(self):
        # unit disc written as 1 - x^2 - y^2 >= 0
        disc = ShapeSpec(kind='custom', bounds=[-1, 1, -1, 1],
                         inequalities=[[[0, 0, 1.0], [2, 0, -1.0], [0, 2, -1.0]]])
        X = np.array([0.0, 0.8, 0.8])
        Y = np.array([0.0, 0.5, 0.7])
        self.assertEqual(disc.contains(X, Y).tolist(), [True, True, False])

    def test_invalid_shapes(self):
        with self.assertRaises(ValueError):
            ShapeSpec(kind='disc')
        with self.assertRaises(ValueError):
            ShapeSpec(kind='rectangle', a=1.0)
        with self.assertRaises(ValueError):
            ShapeSpec(kind='polygon', vertices=[[0, 0], [1, 0]])
        with self.assertRaises(ValueError):
            ShapeSpec(kind='custom', bounds=[1, 0, 0, 1], inequalities=[[[0, 0, 1]]])
        with self.assertRaises(ValueError):
            DensitySpec(shape={'kind': 'disc', 'radius': 1}, n=0)


class TestSampling(unittest.TestCase):
    def test_deterministic_given_seed(self):
        spec = DensitySpec(shape={'kind': 'ellipse', 'a': 3, 'b': 1},
                           density={'kind': 'gaussian', 'sx': 2, 'sy': 1}, n=500, seed=42)
        first = sample_positions(spec)
        self.assertEqual(first.shape, (500, 2))
        self.assertTrue(np.array_equal(first, sample_positions(spec)))
        other = sample_positions(spec.copy(update={'seed': 43}))
        self.assertFalse(np.array_equal(first, other))

    def test_points_inside_shape(self):
        spec = DensitySpec(shape={'kind': 'polygon',
                                  'vertices': [[0, 3], [1, 1], [3, 0], [1, -1], [0, -3],
                                               [-1, -1], [-3, 0], [-1, 1]]}, n=2000, seed=1)
        points = sample_positions(spec)
        self.assertTrue(np.all(spec.shape.contains(points[:, 0], points[:, 1])))

    def test_uniform_rectangle_variance(self):
        spec = DensitySpec(shape={'kind': 'rectangle', 'a': 3, 'b': 1}, n=20_000, seed=7)
        report = moments(sample_density(spec))
        self.assertLess(abs(report.var_x - 3.0), 4 * report.se_var_x)
        self.assertLess(abs(report.var_y - 1 / 3), 4 * report.se_var_y)
        self.assertLess(abs(report.m_xy), 4 * report.se_xy)

    def test_uniform_disc_moments(self):
        spec = DensitySpec(shape={'kind': 'disc', 'radius': 2}, n=20_000, seed=9)
        report = moments(sample_density(spec))
        self.assertLess(abs(report.var_x - 1.0), 4 * report.se_var_x)
        self.assertLess(abs(report.var_y - 1.0), 4 * report.se_var_y)
        self.assertLess(abs(report.m_xy), 4 * report.se_xy)
        self.assertLess(abs(report.m_diff), 4 * report.se_diff)

    def test_polynomial_density_skews_samples(self):
        # rho = 1 + x on [-1, 1]^2 has mean x = 1/3
        spec = DensitySpec(shape={'kind': 'rectangle', 'a': 1, 'b': 1},
                           density={'kind': 'polynomial', 'terms': [[0, 0, 1.0], [1, 0, 1.0]]},
                           n=20_000, seed=3)
        points = sample_positions(spec)
        error = points[:, 0].std() / np.sqrt(len(points))
        self.assertLess(abs(points[:, 0].mean() - 1 / 3), 4 * error)

    def test_tiny_shape_fails(self):
        spec = DensitySpec(shape={'kind': 'custom', 'bounds': [-1, 1, -1, 1],
                                  'inequalities': [[[0, 0, 1e-8], [2, 0, -1.0], [0, 2, -1.0]]]},
                           n=10, seed=0)
        with self.assertRaises(SamplingError):
            sample_positions(spec)

    def test_non_positive_density(self):
        spec = DensitySpec(shape={'kind': 'disc', 'radius': 1},
                           density={'kind': 'polynomial', 'terms': [[0, 0, -1.0]]}, n=10)
        with self.assertRaises(ConfigError):
            sample_positions(spec)
