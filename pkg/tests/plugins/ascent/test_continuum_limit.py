import math
import unittest

import numpy as np

from src.common.utils import angle_between
from src.plugins.ascent import l1_sigma, variance_direction
from src.plugins.deployment import DensitySpec, moments, sample_density
from src.plugins.field import GaussianField

N = 100_000


class TestContinuumLimit(unittest.TestCase):
    '''
    Large sampled swarms against the moment conditions of their density.
    Tolerances are three Monte-Carlo standard errors.
    '''

    def setUp(self):
        self.field = GaussianField(1.0, [0.0, 0.0], np.eye(2) / 200)
        self.p_c = np.array([12.0, 7.0])
        self.grad = self.field.gradient(self.p_c)

    def assert_symmetric(self, spec: DensitySpec):
        d = sample_density(spec)
        report = moments(d)
        self.assertLess(abs(report.m_xy), 3 * report.se_xy)
        self.assertLess(abs(report.m_diff), 3 * report.se_diff)
        # the traceless part of the covariance turns l1_sigma away from the gradient
        variance = (report.var_x + report.var_y) / 2
        error = math.sqrt(report.se_diff ** 2 / 4 + report.se_xy ** 2) / variance
        self.assertLess(angle_between(l1_sigma(self.field, self.p_c, d), self.grad), 3 * error)

    def test_uniform_disc(self):
        self.assert_symmetric(DensitySpec(shape={'kind': 'disc', 'radius': 10}, n=N, seed=31))

    def test_fourfold_star_with_radial_density(self):
        vertices = []
        for k in range(8):
            radius = 10.0 if k % 2 == 0 else 4.0
            angle = k * math.pi / 4
            vertices.append([radius * math.cos(angle), radius * math.sin(angle)])
        self.assert_symmetric(DensitySpec(shape={'kind': 'polygon', 'vertices': vertices},
                                          density={'kind': 'gaussian', 'sx': 6, 'sy': 6},
                                          n=N, seed=32))

    def test_stretched_rectangle_follows_variances(self):
        a, b = 2.0, 1.0
        d = sample_density(DensitySpec(shape={'kind': 'rectangle', 'a': a, 'b': b}, n=N, seed=33))
        report = moments(d)
        self.assertLess(abs(report.m_xy), 3 * report.se_xy)
        self.assertGreater(report.m_diff, 0.9)

        predicted = variance_direction(a * a / 3, b * b / 3, self.grad)
        measured = l1_sigma(self.field, self.p_c, d)
        covariance = np.array([[report.var_x, report.m_xy], [report.m_xy, report.var_y]])
        spread = math.sqrt(report.se_var_x ** 2 + report.se_var_y ** 2 + 2 * report.se_xy ** 2)
        error = spread * np.linalg.norm(self.grad) / np.linalg.norm(covariance @ self.grad)
        self.assertLess(angle_between(measured, predicted), 3 * error)
        isotropic = variance_direction(1.0, 1.0, self.grad)
        self.assertGreater(angle_between(measured, isotropic), 10 * error)
