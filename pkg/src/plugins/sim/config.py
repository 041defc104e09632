import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Extra, root_validator, validator

from src.common.config import plugin_config
from src.common.utils import ConfigError
from src.common.utils.io_tools import IOTools
from src.plugins.deployment import DensitySpec, DeploymentSpec
from src.plugins.field import FieldSpec


class NoiseSchedule(BaseModel, extra=Extra.forbid):
    # every robot rotates its commanded direction by an angle drawn
    # uniformly in [-max_deviation, max_deviation], redrawn every period
    period: float = plugin_config.noise_period
    max_deviation: float = math.radians(plugin_config.noise_max_deviation_deg)

    @validator('period')
    def positive_period(cls, period):
        if period <= 0:
            raise ValueError('noise period must be positive')
        return period

    @validator('max_deviation')
    def bounded_deviation(cls, value):
        if not 0 <= value <= math.pi:
            raise ValueError('max_deviation is an angle in [0, pi] radians')
        return value


class DeathSchedule(BaseModel, extra=Extra.forbid):
    # Bernoulli failure per robot per noise period
    probability: float = 0.0
    # alternatively: expected number of deaths over horizon time units
    expected_deaths: Optional[float] = None
    horizon: Optional[float] = None
    # robot index -> death time
    scripted: Dict[int, float] = {}

    @root_validator(skip_on_failure=True)
    def check_rates(cls, values):
        if not 0 <= values['probability'] <= 1:
            raise ValueError('probability must lie in [0, 1]')
        if values.get('expected_deaths') is not None:
            horizon = values.get('horizon')
            if horizon is None or horizon <= 0:
                raise ValueError('expected_deaths needs a positive horizon')
            if values['expected_deaths'] < 0:
                raise ValueError('expected_deaths must be non-negative')
        if any(t < 0 for t in values['scripted'].values()):
            raise ValueError('scripted death times must be non-negative')
        return values

    def per_period(self, n: int, period: float) -> float:
        '''
        Per-period probability; with expected_deaths the survival over the
        horizon is 1 - expected_deaths / n.
        '''
        if self.expected_deaths is None:
            return self.probability
        fraction = min(self.expected_deaths / n, 1.0)
        if fraction >= 1.0:
            return 1.0
        periods = self.horizon / period
        return 1.0 - (1.0 - fraction) ** (1.0 / periods)


class MorphEvent(BaseModel, extra=Extra.forbid):
    time: float
    # target A applied to the initial formation
    matrix: Optional[List[List[float]]] = None
    # or a formation sampled from a density, assigned to the alive robots
    density: Optional[DensitySpec] = None
    duration: float = 5.0
    # formation keeping stays on this long after the transition
    settle: float = 5.0

    @root_validator(skip_on_failure=True)
    def check_target(cls, values):
        if (values.get('matrix') is None) == (values.get('density') is None):
            raise ValueError('a morph needs exactly one of matrix or density')
        if values['time'] < 0 or values['duration'] < 0 or values['settle'] < 0:
            raise ValueError('morph time, duration and settle must be non-negative')
        matrix = values.get('matrix')
        if matrix is not None:
            A = np.array(matrix, dtype=float)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise ValueError('morph matrix must be square')
            singular = np.linalg.svd(A, compute_uv=False)
            if singular[-1] <= 1e-12 * max(singular[0], 1.0):
                raise ValueError('morph matrix is singular')
        return values


class Obstacle(BaseModel, extra=Extra.forbid):
    center: List[float]
    radius: float

    @validator('radius')
    def positive_radius(cls, radius):
        if radius <= 0:
            raise ValueError('obstacle radius must be positive')
        return radius


class StopCondition(BaseModel, extra=Extra.forbid):
    max_time: float = 200.0
    # None means twice the current radius of the alive swarm
    epsilon: Optional[float] = None

    @validator('max_time')
    def positive_time(cls, value):
        if value <= 0:
            raise ValueError('max_time must be positive')
        return value


class EventSchedule(BaseModel, extra=Extra.forbid):
    noise: Optional[NoiseSchedule] = None
    deaths: Optional[DeathSchedule] = None
    morphs: List[MorphEvent] = []
    obstacles: List[Obstacle] = []
    shape_gain: float = plugin_config.shape_gain

    @validator('morphs')
    def sorted_morphs(cls, morphs):
        times = [m.time for m in morphs]
        if times != sorted(times):
            raise ValueError('morph events must be sorted by time')
        return morphs

    @property
    def period(self) -> float:
        return self.noise.period if self.noise is not None else plugin_config.noise_period


class SimConfig(BaseModel, extra=Extra.forbid):
    name: str = ''
    field: FieldSpec
    deployment: Optional[DeploymentSpec] = None
    density_spec: Optional[DensitySpec] = None
    # rescale the initial formation to this radius D
    formation_radius: Optional[float] = None
    start: List[float]
    schedule: EventSchedule = EventSchedule()
    stop: StopCondition = StopCondition()
    dt: float = plugin_config.default_dt
    seed: int = 0
    # one trajectory row every log_every steps
    log_every: int = 1

    @root_validator(skip_on_failure=True)
    def check_formation(cls, values):
        if (values.get('deployment') is None) == (values.get('density_spec') is None):
            raise ValueError('give exactly one of deployment or density_spec')
        if values['dt'] <= 0:
            raise ValueError('dt must be positive')
        if values['log_every'] < 1:
            raise ValueError('log_every must be at least 1')
        radius = values.get('formation_radius')
        if radius is not None and radius <= 0:
            raise ValueError('formation_radius must be positive')
        return values

    def canonical(self) -> Dict[str, Any]:
        return json.loads(self.json())


def resolve_config_path(name_or_path) -> Path:
    '''
    A path to a JSON document, or the name of a shipped preset
    '''
    path = Path(name_or_path)
    if path.exists():
        return path
    preset = plugin_config.presets_dir / '{}.json'.format(path.stem)
    if preset.exists():
        return preset
    raise ConfigError(f'{name_or_path}: no such file or preset')


def load_config(name_or_path) -> SimConfig:
    return IOTools.read_model(SimConfig, resolve_config_path(name_or_path))
