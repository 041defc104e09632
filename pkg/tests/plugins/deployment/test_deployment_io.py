import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.common.utils import ConfigError
from src.plugins.deployment import (Deployment, DeploymentSpec, build_deployment, from_json,
                                    load_csv, regular_polygon, regular_polyhedron, save_csv,
                                    to_json)


class TestDeploymentFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_csv_keeps_exact_values(self):
        for d in (regular_polygon(7, 1.3, 0.2), regular_polyhedron('icosahedron', 2.0)):
            path = save_csv(d, self.dir / 'd{}.csv'.format(d.m))
            self.assertTrue(np.array_equal(load_csv(path).offsets, d.offsets))

    def test_csv_header_and_rows(self):
        path = self.dir / 'bad.csv'
        path.write_text('a,b\n1,2\n')
        with self.assertRaises(ConfigError):
            load_csv(path)
        path.write_text('x,y\n1,2\n3\n')
        with self.assertRaises(ConfigError):
            load_csv(path)
        path.write_text('x,y\n1,oops\n')
        with self.assertRaises(ConfigError):
            load_csv(path)
        with self.assertRaises(ConfigError):
            load_csv(self.dir / 'missing.csv')

    def test_round_trips_are_exact(self):
        for N in range(3, 41):
            d = regular_polygon(N, 1.3, 0.2)
            self.assertTrue(np.array_equal(from_json(to_json(d)).offsets, d.offsets), N)
            path = save_csv(d, self.dir / 'p{}.csv'.format(N))
            self.assertTrue(np.array_equal(load_csv(path).offsets, d.offsets), N)
            self.assertTrue(np.array_equal(Deployment(d.offsets).offsets, d.offsets), N)

    def test_json(self):
        with self.assertRaises(ConfigError):
            from_json({'points': []})
        with self.assertRaises(ConfigError):
            from_json({'offsets': [[1, 2, 3, 4]]})


class TestBuildDeployment(unittest.TestCase):
    def test_kinds(self):
        self.assertEqual(build_deployment({'kind': 'polygon', 'n': 12, 'radius': 2}).N, 12)
        self.assertEqual(build_deployment({'kind': 'polyhedron', 'solid': 'cube'}).m, 3)
        rectangle = build_deployment(DeploymentSpec(kind='rectangle', a=2, b=1))
        self.assertTrue(np.allclose(rectangle.shape.P, np.diag([16.0, 4.0])))
        offsets = build_deployment({'kind': 'offsets', 'offsets': [[0, 0], [2, 0], [0, 2]]})
        self.assertEqual(offsets.N, 3)
        sampled = build_deployment({'shape': {'kind': 'disc', 'radius': 1}, 'n': 30, 'seed': 2})
        self.assertEqual(sampled.N, 30)

    def test_relative_csv_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            save_csv(regular_polygon(4, 1.0), Path(tmp) / 'square.csv')
            d = build_deployment({'kind': 'csv', 'path': 'square.csv'}, base_dir=Path(tmp))
            self.assertEqual(d.N, 4)

    def test_invalid_specs(self):
        with self.assertRaises(ConfigError):
            build_deployment({'kind': 'polygon'})
        with self.assertRaises(ConfigError):
            build_deployment({'kind': 'polyhedron', 'solid': 'torus'})
        with self.assertRaises(ConfigError):
            build_deployment({'kind': 'polygon', 'n': 5, 'radius': -1})
        with self.assertRaises(ConfigError):
            build_deployment({'kind': 'offsets', 'offsets': [[1, 2, 3, 4]]})
        with self.assertRaises(ConfigError):
            build_deployment({'kind': 'polygon', 'n': 2})
