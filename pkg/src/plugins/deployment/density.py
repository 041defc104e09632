from typing import List, Optional, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, Extra, root_validator, validator

from src.common.utils import ConfigError, SamplingError

from .model import Deployment, from_positions

# rejection sampling gives up below this acceptance rate
MIN_ACCEPTANCE = 1e-4
# draws needed before the acceptance rate is trusted
MIN_DRAWS = 100_000
MAX_BATCH = 2_000_000
# grid used to bound the density from above
DENSITY_GRID = 256


def _polynomial(terms: List[List[float]], X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    '''
    sum of c * X**i * Y**j over terms [[i, j, c], ...]
    '''
    total = np.zeros_like(X)
    for i, j, c in terms:
        total = total + c * X ** int(i) * Y ** int(j)
    return total


class ShapeSpec(BaseModel, extra=Extra.forbid):
    kind: Literal['disc', 'rectangle', 'ellipse', 'polygon', 'custom']
    # disc
    radius: Optional[float] = None
    # rectangle / ellipse half sides
    a: Optional[float] = None
    b: Optional[float] = None
    # polygon boundary
    vertices: Optional[List[List[float]]] = None
    # custom: bounding box [xmin, xmax, ymin, ymax] and polynomial inequalities >= 0
    bounds: Optional[List[float]] = None
    inequalities: Optional[List[List[List[float]]]] = None

    @root_validator(skip_on_failure=True)
    def check_parameters(cls, values):
        kind = values['kind']
        if kind == 'disc' and not (values.get('radius') or 0) > 0:
            raise ValueError('a disc needs radius > 0')
        if kind in ('rectangle', 'ellipse'):
            if not ((values.get('a') or 0) > 0 and (values.get('b') or 0) > 0):
                raise ValueError(f'{kind} needs a > 0 and b > 0')
        if kind == 'polygon' and (not values.get('vertices') or len(values['vertices']) < 3):
            raise ValueError('a polygon needs at least 3 vertices')
        if kind == 'custom':
            bounds = values.get('bounds')
            if not bounds or len(bounds) != 4 or bounds[0] >= bounds[1] or bounds[2] >= bounds[3]:
                raise ValueError('custom shapes need bounds [xmin, xmax, ymin, ymax]')
            if not values.get('inequalities'):
                raise ValueError('custom shapes need at least one inequality')
        return values

    def bounding_box(self):
        if self.kind == 'disc':
            return -self.radius, self.radius, -self.radius, self.radius
        if self.kind in ('rectangle', 'ellipse'):
            return -self.a, self.a, -self.b, self.b
        if self.kind == 'polygon':
            v = np.array(self.vertices, dtype=float)
            return v[:, 0].min(), v[:, 0].max(), v[:, 1].min(), v[:, 1].max()
        return tuple(self.bounds)

    def contains(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        if self.kind == 'disc':
            return X * X + Y * Y <= self.radius ** 2
        if self.kind == 'rectangle':
            return (np.abs(X) <= self.a) & (np.abs(Y) <= self.b)
        if self.kind == 'ellipse':
            return (X / self.a) ** 2 + (Y / self.b) ** 2 <= 1.0
        if self.kind == 'polygon':
            return self._inside_polygon(X, Y)
        inside = np.ones_like(X, dtype=bool)
        for terms in self.inequalities:
            inside &= _polynomial(terms, X, Y) >= 0
        return inside

    def _inside_polygon(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        # even-odd rule
        v = np.array(self.vertices, dtype=float)
        inside = np.zeros_like(X, dtype=bool)
        for (x1, y1), (x2, y2) in zip(v, np.roll(v, -1, axis=0)):
            crosses = (y1 > Y) != (y2 > Y)
            with np.errstate(divide='ignore', invalid='ignore'):
                x_cross = (x2 - x1) * (Y - y1) / (y2 - y1) + x1
            inside ^= crosses & (X < x_cross)
        return inside


class DensityFunction(BaseModel, extra=Extra.forbid):
    kind: Literal['uniform', 'polynomial', 'gaussian'] = 'uniform'
    terms: Optional[List[List[float]]] = None
    sx: float = 1.0
    sy: float = 1.0

    @root_validator(skip_on_failure=True)
    def check_parameters(cls, values):
        if values['kind'] == 'polynomial' and not values.get('terms'):
            raise ValueError('a polynomial density needs terms [[i, j, c], ...]')
        if values['kind'] == 'gaussian' and not (values['sx'] > 0 and values['sy'] > 0):
            raise ValueError('a gaussian density needs sx > 0 and sy > 0')
        return values

    def __call__(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        if self.kind == 'uniform':
            return np.ones_like(X)
        if self.kind == 'polynomial':
            return _polynomial(self.terms, X, Y)
        return np.exp(-0.5 * ((X / self.sx) ** 2 + (Y / self.sy) ** 2))


class DensitySpec(BaseModel, extra=Extra.forbid):
    shape: ShapeSpec
    density: DensityFunction = DensityFunction()
    n: int = 250
    seed: int = 0

    @validator('n')
    def positive(cls, n):
        if n < 1:
            raise ValueError('n must be at least 1')
        return n


def _density_ceiling(spec: DensitySpec) -> float:
    if spec.density.kind == 'uniform':
        return 1.0
    xmin, xmax, ymin, ymax = spec.shape.bounding_box()
    X, Y = np.meshgrid(np.linspace(xmin, xmax, DENSITY_GRID),
                       np.linspace(ymin, ymax, DENSITY_GRID), indexing='ij')
    inside = spec.shape.contains(X, Y)
    if not inside.any():
        raise SamplingError('the shape contains none of the density grid points')
    rho = spec.density(X, Y)[inside]
    top = float(rho.max())
    if top <= 0:
        raise ConfigError('the density must be positive somewhere on the shape')
    if rho.min() < -1e-12 * top:
        raise ConfigError('the density is negative on the shape')
    return 1.1 * top


def sample_positions(spec: DensitySpec) -> np.ndarray:
    '''
    Draw spec.n points i.i.d. with density proportional to rho over the shape,
    by rejection from the shape's bounding box. Deterministic given the seed.
    '''
    rng = np.random.default_rng(spec.seed)
    ceiling = _density_ceiling(spec)
    xmin, xmax, ymin, ymax = spec.shape.bounding_box()

    accepted = []
    count, drawn = 0, 0
    rate = 0.5
    while count < spec.n:
        batch = int(min(MAX_BATCH, max(10_000, 2 * (spec.n - count) / rate)))
        X = rng.uniform(xmin, xmax, batch)
        Y = rng.uniform(ymin, ymax, batch)
        U = rng.uniform(0.0, ceiling, batch)
        keep = spec.shape.contains(X, Y) & (U < spec.density(X, Y))
        accepted.append(np.stack([X[keep], Y[keep]], axis=1))
        count += int(keep.sum())
        drawn += batch
        rate = max(count / drawn, MIN_ACCEPTANCE)
        if drawn >= MIN_DRAWS and count / drawn < MIN_ACCEPTANCE:
            raise SamplingError('acceptance rate {:.2e} after {} draws for shape {}'.format(
                count / drawn, drawn, spec.shape.kind))

    logger.debug('sampled {} points from {} draws ({} shape)', spec.n, drawn, spec.shape.kind)
    return np.concatenate(accepted)[:spec.n]


def sample_density(spec: DensitySpec) -> Deployment:
    return from_positions(sample_positions(spec))[1]
