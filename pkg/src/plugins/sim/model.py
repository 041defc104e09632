from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, validator

from src.common.utils import angle_between
from src.common.utils.io_tools import IOTools
from src.plugins.deployment import Deployment, from_positions

RUNNING = 'running'
ARRIVED = 'arrived'
STOPPED = 'stopped'
ALL_DEAD = 'all-dead'
DEGENERATE = 'degenerate'
TIMEOUT = 'timeout'

STATUSES = (ARRIVED, STOPPED, ALL_DEAD, DEGENERATE, TIMEOUT)


@dataclass
class MorphPlan:
    start: float
    duration: float
    settle: float
    origin: np.ndarray
    target: np.ndarray

    def reference(self, t: float) -> np.ndarray:
        if self.duration <= 0:
            s = 1.0
        else:
            s = min(max((t - self.start) / self.duration, 0.0), 1.0)
        return (1.0 - s) * self.origin + s * self.target

    def active(self, t: float) -> bool:
        return self.start <= t <= self.start + self.duration + self.settle


@dataclass
class Probe:
    '''
    What one step saw before moving: the alive swarm, its readings and the
    direction it computed. gradient is diagnostic only.
    '''
    t: float
    p_c: np.ndarray
    alive_count: int
    readings: np.ndarray
    # indices of the robots behind readings
    robots: np.ndarray
    spreads: np.ndarray
    L: np.ndarray
    gradient: np.ndarray
    L1: np.ndarray
    sigma_pc: float
    distance: float
    epsilon: float
    rank_ratio: float


@dataclass
class SimState:
    t: float
    positions: np.ndarray
    alive: np.ndarray
    x_ref0: np.ndarray
    x_ref: np.ndarray
    rng: np.random.Generator
    noise: np.ndarray
    noise_axes: Optional[np.ndarray] = None
    step_index: int = 0
    morph: Optional[MorphPlan] = None
    next_morph: int = 0
    last_direction: Optional[np.ndarray] = None
    fallback: int = 0
    degenerate_steps: int = 0
    status: str = RUNNING
    controller_stop: bool = False
    death_times: Optional[np.ndarray] = None
    probe: Optional[Probe] = None
    warnings: List[str] = field(default_factory=list)

    @classmethod
    def initial(cls, p_c, d: Deployment, seed: int) -> 'SimState':
        positions = d.positions(p_c)
        offsets = np.array(d.offsets)
        return cls(t=0.0, positions=positions, alive=np.ones(d.N, dtype=bool),
                   x_ref0=offsets, x_ref=offsets.copy(), rng=np.random.default_rng(seed),
                   noise=np.zeros(d.N), death_times=np.full(d.N, np.nan))

    @property
    def N(self) -> int:
        return self.positions.shape[0]

    @property
    def m(self) -> int:
        return self.positions.shape[1]

    @property
    def alive_count(self) -> int:
        return int(self.alive.sum())

    @property
    def centroid(self) -> np.ndarray:
        return self.positions[self.alive].mean(axis=0)

    def alive_deployment(self):
        return from_positions(self.positions[self.alive])


def trajectory_header(m: int) -> List[str]:
    axes = 'xyz'[:m]
    return (['t'] + ['pc_{}'.format(a) for a in axes] + ['dist_to_source', 'alive_count']
            + ['L_{}'.format(a) for a in axes]
            + ['sigma_pc', 'sigma_mean', 'sigma_min', 'sigma_max',
               'spread_mean', 'spread_max', 'angle_to_gradient', 'divergence'])


@dataclass
class TrajectoryLog:
    m: int
    rows: List[list] = field(default_factory=list)
    # (t, robot, sigma) for every alive robot of every logged row
    readings: List[list] = field(default_factory=list)
    positions: List[list] = field(default_factory=list)

    def record(self, probe: Probe):
        row = [probe.t, *probe.p_c.tolist(), probe.distance, probe.alive_count, *probe.L.tolist(),
               probe.sigma_pc, float(probe.readings.mean()), float(probe.readings.min()),
               float(probe.readings.max()), float(probe.spreads.mean()), float(probe.spreads.max()),
               angle_between(probe.L, probe.gradient), float(np.linalg.norm(probe.L - probe.L1))]
        self.rows.append(row)
        self.readings.extend([probe.t, int(i), float(s)] for i, s in zip(probe.robots, probe.readings))

    def dump_positions(self, state: SimState):
        for i, (p, alive) in enumerate(zip(state.positions, state.alive)):
            self.positions.append([state.t, i, *p.tolist(), int(alive)])

    @property
    def header(self) -> List[str]:
        return trajectory_header(self.m)

    def column(self, name: str) -> np.ndarray:
        index = self.header.index(name)
        return np.array([row[index] for row in self.rows], dtype=float)

    def to_csv(self, path):
        return IOTools.write_csv(path, self.header, self.rows)

    def positions_to_csv(self, path):
        header = ['t', 'robot', *'xyz'[:self.m], 'alive']
        return IOTools.write_csv(path, header, self.positions)

    def readings_to_csv(self, path):
        return IOTools.write_csv(path, ['t', 'robot', 'sigma'], self.readings)


class RunSummary(BaseModel):
    name: str = ''
    status: str
    arrived: bool
    controller_stop: bool
    arrival_time: Optional[float] = None
    end_time: float
    steps: int
    source: List[float]
    epsilon: float
    initial_alive: int
    final_alive: int
    deaths: int
    min_distance: float
    final_distance: float
    min_rank_ratio: float
    degenerate_steps: int
    obstacle_violations: int
    first_violation_time: Optional[float] = None
    mean_angle_to_gradient: Optional[float] = None
    mean_divergence: Optional[float] = None
    warnings: List[str] = []

    @validator('status')
    def finished(cls, status):
        if status not in STATUSES:
            raise ValueError('a summary needs a final status, got {!r}'.format(status))
        return status
