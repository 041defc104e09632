import itertools
from dataclasses import dataclass
from typing import List, Optional, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, Extra, root_validator
from scipy.optimize import minimize

from src.common.config import plugin_config
from src.common.utils import ConfigError, DimensionError

from .model import SignalField

# points per chunk when sampling derivatives on a grid
CHUNK_SIZE = 1 << 15


class RegionSpec(BaseModel, extra=Extra.forbid):
    '''
    Axis-aligned box (lo, hi) or annulus shell (center, inner, outer)
    '''
    kind: Literal['box', 'annulus']
    lo: Optional[List[float]] = None
    hi: Optional[List[float]] = None
    center: Optional[List[float]] = None
    inner: float = 0.0
    outer: float = 0.0

    @root_validator(skip_on_failure=True)
    def check_geometry(cls, values):
        if values['kind'] == 'box':
            lo, hi = values.get('lo'), values.get('hi')
            if lo is None or hi is None or len(lo) != len(hi):
                raise ValueError('a box needs lo and hi of equal length')
            if any(l > h for l, h in zip(lo, hi)):
                raise ValueError('box lo must not exceed hi')
        else:
            if values.get('center') is None:
                raise ValueError('an annulus needs a center')
            if not 0 <= values['inner'] <= values['outer']:
                raise ValueError('annulus radii must satisfy 0 <= inner <= outer')
        return values

    @property
    def m(self) -> int:
        return len(self.lo) if self.kind == 'box' else len(self.center)

    def contains(self, points, slack: float = 1e-12) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.m:
            raise DimensionError('region is {}-dimensional'.format(self.m))
        if self.kind == 'box':
            return np.all((points >= np.array(self.lo) - slack)
                          & (points <= np.array(self.hi) + slack), axis=-1)
        r = np.linalg.norm(points - np.array(self.center), axis=-1)
        return (r >= self.inner - slack) & (r <= self.outer + slack)

    def grid(self, resolution: int) -> np.ndarray:
        if resolution < 2:
            raise ConfigError('grid resolution must be at least 2 per axis')
        if self.kind == 'box':
            axes = [np.linspace(l, h, resolution) for l, h in zip(self.lo, self.hi)]
            return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, self.m)

        center = np.array(self.center)
        radii = np.linspace(self.inner, self.outer, resolution)
        if self.m == 2:
            phi = np.linspace(0.0, 2 * np.pi, 2 * resolution, endpoint=False)
            r, p = np.meshgrid(radii, phi, indexing='ij')
            unit = np.stack([np.cos(p), np.sin(p)], axis=-1)
        elif self.m == 3:
            theta = np.linspace(0.0, np.pi, resolution)
            phi = np.linspace(0.0, 2 * np.pi, 2 * resolution, endpoint=False)
            r, t, p = np.meshgrid(radii, theta, phi, indexing='ij')
            unit = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1)
        else:
            raise DimensionError('annulus regions are 2D or 3D')
        return (center + r[..., None] * unit).reshape(-1, self.m)

    def bounding_box(self):
        if self.kind == 'box':
            return np.array(self.lo, dtype=float), np.array(self.hi, dtype=float)
        center = np.array(self.center, dtype=float)
        return center - self.outer, center + self.outer


class RegionBounds(BaseModel):
    '''
    Derivative bounds of a field sampled over a region: K_min <= |grad| <= K_max
    and |H|_2 <= 2 M on the grid. refinement_change is the largest relative
    change of the three numbers when the grid is refined.
    '''
    region: RegionSpec
    k_min: float
    k_max: float
    m_bound: float
    resolution: int
    refined_resolution: int
    samples: int
    refinement_change: float
    contains_source: bool = False
    warnings: List[str] = []

    def conservative(self) -> 'RegionBounds':
        tol = self.refinement_change
        return self.copy(update={
            'k_min': self.k_min * max(0.0, 1.0 - tol),
            'k_max': self.k_max * (1.0 + tol),
            'm_bound': self.m_bound * (1.0 + tol),
        })


def _sample_bounds(field: SignalField, points: np.ndarray):
    k_min, k_max, m_bound = np.inf, 0.0, 0.0
    for start in range(0, len(points), CHUNK_SIZE):
        chunk = points[start:start + CHUNK_SIZE]
        norms = np.linalg.norm(field.gradients(chunk), axis=-1)
        spectral = np.abs(np.linalg.eigvalsh(field.hessians(chunk))).max(axis=-1)
        k_min = min(k_min, float(norms.min()))
        k_max = max(k_max, float(norms.max()))
        m_bound = max(m_bound, float(spectral.max()) / 2.0)
    return k_min, k_max, m_bound


def _relative_change(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def region_bounds(field: SignalField, region, grid_resolution: Optional[int] = None) -> RegionBounds:
    if not isinstance(region, RegionSpec):
        region = RegionSpec.parse_obj(region)
    if region.m != field.m:
        raise DimensionError('region is {}-dimensional, field is {}-dimensional'.format(
            region.m, field.m))
    resolution = grid_resolution or plugin_config.region_grid
    refined = 2 * resolution - 1

    coarse = _sample_bounds(field, region.grid(resolution))
    fine_points = region.grid(refined)
    k_min, k_max, m_bound = _sample_bounds(field, fine_points)
    change = max(_relative_change(a, b) for a, b in zip(coarse, (k_min, k_max, m_bound)))

    warnings = []
    if change > plugin_config.refinement_tolerance:
        warnings.append('grid refinement changed the bounds by {:.2%}'.format(change))

    contains_source = bool(region.contains(field.source))
    if contains_source:
        warnings.append('region contains the source, K_min forced to 0')
        k_min = 0.0

    for warning in warnings:
        logger.warning('region_bounds: {}', warning)

    return RegionBounds(region=region, k_min=k_min, k_max=k_max, m_bound=m_bound,
                        resolution=resolution, refined_resolution=refined,
                        samples=len(fine_points), refinement_change=change,
                        contains_source=contains_source, warnings=warnings)


@dataclass
class MaximizerReport:
    point: np.ndarray
    value: float
    gradient_norm: float
    on_boundary: bool
    nominal_source: np.ndarray

    @property
    def offset(self) -> float:
        return float(np.linalg.norm(self.point - self.nominal_source))


def locate_maximizer(field: SignalField, lo, hi, starts: int = 5) -> MaximizerReport:
    '''
    Bounded L-BFGS-B ascent on the field from its nominal source and a grid of
    starting points; the best local maximum found inside [lo, hi] is reported.
    '''
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)

    def negative(a):
        return -field.eval(a), -field.gradient(a)

    candidates = [np.clip(field.source, lo, hi)]
    axes = [np.linspace(l, h, starts) for l, h in zip(lo, hi)]
    candidates += [np.array(p) for p in itertools.product(*axes)]

    best = None
    for x0 in candidates:
        result = minimize(negative, x0, jac=True, method='L-BFGS-B',
                          bounds=list(zip(lo, hi)), options={'gtol': 1e-12, 'ftol': 1e-15})
        if best is None or result.fun < best.fun:
            best = result

    point = np.asarray(best.x, dtype=float)
    span = np.maximum(hi - lo, 1.0)
    on_boundary = bool(np.any(np.minimum(point - lo, hi - point) <= 1e-6 * span))
    report = MaximizerReport(point=point, value=-float(best.fun),
                             gradient_norm=float(np.linalg.norm(field.gradient(point))),
                             on_boundary=on_boundary, nominal_source=field.source)
    if on_boundary:
        logger.warning('maximizer of {} lies on the arena boundary at {}', field.kind, point)
    return report
