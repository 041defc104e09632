import filecmp
import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.plugins.ascent import certified_radius, certify
from src.plugins.deployment import (DensitySpec, from_positions, is_non_degenerate, sample_density,
                                    sample_positions)
from src.plugins.field import RegionSpec, build_field, region_bounds
from src.plugins.sim import ARRIVED, SimConfig, SimState, load_config, morph_to_density, run

DESK_SCALE = {
    'name': 'desk',
    'field': {'kind': 'gaussian', 'params': {'center': [0, 0], 'shape': [[1 / 1800, 0], [0, 1 / 1800]]}},
    'deployment': {'kind': 'polygon', 'n': 20, 'radius': 1.0},
    'start': [50.0, 0.0],
    'stop': {'epsilon': 2.0, 'max_time': 200.0},
    'dt': 0.02,
}


class TestDeskScaleRun(unittest.TestCase):
    def test_distance_strictly_decreases_until_arrival(self):
        log, summary = run(SimConfig.parse_obj(DESK_SCALE))
        self.assertEqual(summary.status, ARRIVED)
        self.assertTrue(summary.arrived)
        self.assertLess(summary.final_distance, 2.0)
        distance = log.column('dist_to_source')
        self.assertTrue(np.all(np.diff(distance) < 0))
        self.assertTrue(np.all(np.diff(log.column('sigma_pc')) > -1e-9))
        self.assertEqual(summary.deaths, 0)
        self.assertEqual(summary.degenerate_steps, 0)
        self.assertAlmostEqual(summary.arrival_time, 48.0, delta=0.1)


class TestNoisyRunWithDeaths(unittest.TestCase):
    def test_resilience_arrives_for_every_seed(self):
        base = load_config('resilience')
        for seed in range(1, 11):
            log, summary = run(base.copy(update={'seed': seed}))
            self.assertEqual(summary.status, ARRIVED, msg='seed {}'.format(seed))
            self.assertGreaterEqual(summary.deaths, summary.initial_alive // 2)
            self.assertEqual(summary.degenerate_steps, 0)
            self.assertGreater(summary.min_rank_ratio, 1e-3)
            self.assertEqual(summary.obstacle_violations, 0, msg='seed {}'.format(seed))
            self.assertIsNone(summary.first_violation_time)

            readings = log.column('sigma_mean')
            distance = log.column('dist_to_source')
            fifth = len(readings) // 5
            self.assertLess(readings[:fifth].mean(), readings[-fifth:].mean())
            self.assertGreater(distance[:fifth].mean(), distance[-fifth:].mean())

    def test_identical_runs_write_identical_files(self):
        config = load_config('resilience').copy(update={
            'seed': 8, 'stop': load_config('resilience').stop.copy(update={'max_time': 25.0})})
        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            for k in range(2):
                log, summary = run(config, dump_every=100)
                out = Path(tmp) / str(k)
                paths.append((log.to_csv(out / 'trajectory.csv'),
                              log.positions_to_csv(out / 'positions.csv')))
                self.assertEqual(summary.status, 'timeout')
            for first, second in zip(*paths):
                self.assertTrue(filecmp.cmp(first, second, shallow=False))


class TestResilience(unittest.TestCase):
    def test_surviving_subsets_still_ascend(self):
        preset = load_config('resilience')
        field = build_field(preset.field)
        full = sample_density(preset.density_spec)
        region = RegionSpec(kind='annulus', center=[40, 40], inner=30, outer=60)
        bounds = region_bounds(field, region, 48).conservative()
        swarm = full.with_radius(0.5 * certified_radius(full, bounds))

        rng = np.random.default_rng(41)
        axis = np.linspace(-20, 100, 20)
        grid = np.stack(np.meshgrid(axis, axis, indexing='ij'), axis=-1).reshape(-1, 2)
        certified = 0
        for _ in range(100):
            alive = rng.random(swarm.N) >= rng.uniform(0.1, 0.9)
            if alive.sum() < 3:
                continue
            d = from_positions(swarm.offsets[alive])[1]
            if not is_non_degenerate(d) or not certify(d, bounds).holds:
                continue
            certified += 1
            positions = grid[:, None, :] + d.offsets[None, :, :]
            inside = region.contains(positions).all(axis=1)
            readings = field.values(positions[inside])
            L = readings @ d.offsets / (d.N * d.D ** 2)
            grads = field.gradients(grid[inside])
            self.assertGreater(inside.sum(), 50)
            self.assertTrue(np.all(np.sum(grads * L, axis=1) > 0))
        self.assertGreaterEqual(certified, 50)


class TestDensityMorph(unittest.TestCase):
    def test_targets_come_from_the_sample(self):
        d = sample_density(DensitySpec(shape={'kind': 'disc', 'radius': 5}, n=40, seed=2))
        state = SimState.initial([0.0, 0.0], d, seed=0)
        state.alive[:10] = False
        spec = DensitySpec(shape={'kind': 'rectangle', 'a': 8, 'b': 1}, seed=6)
        morph_to_density(state, spec, duration=1.0)
        target = state.morph.target
        # dead robots keep their reference slot
        self.assertTrue(np.array_equal(target[:10], d.offsets[:10]))
        sample = sample_positions(spec.copy(update={'n': 30}))
        sample = sample - sample.mean(axis=0)
        self.assertEqual(sorted(map(tuple, np.round(target[10:], 12))),
                         sorted(map(tuple, np.round(sample, 12))))
