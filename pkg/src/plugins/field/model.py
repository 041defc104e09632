from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from src.common.utils import DimensionError, as_point


class SignalField(ABC):
    '''
    Positive C2 scalar field with analytic first and second derivatives.

    The vectorized methods take arrays shaped (..., m); eval / gradient /
    hessian are the single-point forms. Instances are immutable.
    '''
    kind: str = ''

    @property
    @abstractmethod
    def m(self) -> int:
        ...

    @property
    @abstractmethod
    def source(self) -> np.ndarray:
        ...

    @abstractmethod
    def values(self, points: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def gradients(self, points: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def hessians(self, points: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def params(self) -> dict:
        ...

    def to_spec(self) -> dict:
        return {'kind': self.kind, 'params': self.params()}

    def _points(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim == 0 or points.shape[-1] != self.m:
            raise DimensionError(
                'field is {}-dimensional, got points of shape {}'.format(self.m, points.shape))
        return points

    def eval(self, a) -> float:
        return float(self.values(as_point(a, self.m)))

    def gradient(self, a) -> np.ndarray:
        return self.gradients(as_point(a, self.m))

    def hessian(self, a) -> np.ndarray:
        return self.hessians(as_point(a, self.m))


def _outer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., :, None] * v[..., None, :]


@dataclass(frozen=True, eq=False)
class GaussianField(SignalField):
    '''
    amplitude * exp(-(a - c)^T Q (a - c)) with Q symmetric positive definite
    '''
    amplitude: float
    center: np.ndarray
    shape: np.ndarray

    kind = 'gaussian'

    def __post_init__(self):
        center = np.array(self.center, dtype=float)
        shape = np.array(self.shape, dtype=float)
        if shape.shape != (center.size, center.size):
            raise DimensionError('gaussian shape must be {0}x{0}'.format(center.size))
        shape = (shape + shape.T) / 2
        if np.linalg.eigvalsh(shape)[0] <= 0:
            raise ValueError('gaussian shape matrix must be positive definite')
        if self.amplitude <= 0:
            raise ValueError('gaussian amplitude must be positive')
        object.__setattr__(self, 'amplitude', float(self.amplitude))
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'shape', shape)

    @property
    def m(self) -> int:
        return self.center.size

    @property
    def source(self) -> np.ndarray:
        return self.center.copy()

    def _terms(self, points) -> Tuple[np.ndarray, np.ndarray]:
        d = self._points(points) - self.center
        qd = d @ self.shape
        g = self.amplitude * np.exp(-np.asarray(np.sum(d * qd, axis=-1)))
        return g, qd

    def values(self, points) -> np.ndarray:
        return self._terms(points)[0]

    def gradients(self, points) -> np.ndarray:
        g, qd = self._terms(points)
        return -2.0 * g[..., None] * qd

    def hessians(self, points) -> np.ndarray:
        g, qd = self._terms(points)
        return g[..., None, None] * (4.0 * _outer(qd, qd) - 2.0 * self.shape)

    def params(self) -> dict:
        return {'amplitude': self.amplitude, 'center': self.center.tolist(),
                'shape': self.shape.tolist()}


@dataclass(frozen=True, eq=False)
class SmoothedPowerLawField(SignalField):
    '''
    strength / (|a - center|^2 + smoothing^2), the 1/r^2 law with the origin
    singularity removed
    '''
    strength: float
    center: np.ndarray
    smoothing: float = 1.0

    kind = 'smoothed-power-law'

    def __post_init__(self):
        if self.strength <= 0 or self.smoothing <= 0:
            raise ValueError('power law strength and smoothing must be positive')
        object.__setattr__(self, 'strength', float(self.strength))
        object.__setattr__(self, 'smoothing', float(self.smoothing))
        object.__setattr__(self, 'center', np.array(self.center, dtype=float))

    @property
    def m(self) -> int:
        return self.center.size

    @property
    def source(self) -> np.ndarray:
        return self.center.copy()

    def _terms(self, points) -> Tuple[np.ndarray, np.ndarray]:
        d = self._points(points) - self.center
        u = np.asarray(np.sum(d * d, axis=-1)) + self.smoothing ** 2
        return d, u

    def values(self, points) -> np.ndarray:
        _, u = self._terms(points)
        return self.strength / u

    def gradients(self, points) -> np.ndarray:
        d, u = self._terms(points)
        return (-2.0 * self.strength / u ** 2)[..., None] * d

    def hessians(self, points) -> np.ndarray:
        d, u = self._terms(points)
        eye = np.eye(self.m)
        return (8.0 * self.strength / u ** 3)[..., None, None] * _outer(d, d) \
            - (2.0 * self.strength / u ** 2)[..., None, None] * eye

    def params(self) -> dict:
        return {'strength': self.strength, 'center': self.center.tolist(),
                'smoothing': self.smoothing}


# constants of the non-convex benchmark signal
U_X = np.array([1.0, 0.0])
U_Y = np.array([0.0, 1.0])
A_1 = np.array([[1.0 / np.sqrt(30.0), 0.0], [1.0, 0.0]])
A_2 = np.array([[1.0, 0.0], [1.0, 1.0 / np.sqrt(15.0)]])
S_ROT = np.array([[1.0, -1.0], [1.0, 1.0]])
NONCONVEX_SOURCE = 40.0 * (U_X + U_Y)


@dataclass(frozen=True, eq=False)
class NonconvexField(SignalField):
    '''
    2 - 0.04 |d| + exp(-0.9 d^T A1 uX) + exp(0.9 d^T S^T A2 S uY), d = a - source.

    |d| is replaced by sqrt(|d|^2 + s^2) - s so the field is C2 and still
    equals 4 at the source. The formula is unbounded along some directions and
    becomes negative far away: it is meant for a bounded arena only, and its
    nominal source is not a stationary point (see locate_maximizer).
    '''
    center: Tuple[float, float] = (40.0, 40.0)
    smoothing: float = 1.0

    kind = 'nonconvex'

    def __post_init__(self):
        center = np.array(self.center, dtype=float)
        if center.shape != (2,):
            raise DimensionError('the non-convex field is two-dimensional')
        if self.smoothing <= 0:
            raise ValueError('smoothing must be positive')
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'smoothing', float(self.smoothing))

    @cached_property
    def _alpha(self) -> np.ndarray:
        return -0.9 * (A_1 @ U_X)

    @cached_property
    def _beta(self) -> np.ndarray:
        return 0.9 * (S_ROT.T @ A_2 @ S_ROT @ U_Y)

    @property
    def m(self) -> int:
        return 2

    @property
    def source(self) -> np.ndarray:
        return self.center.copy()

    def _terms(self, points):
        d = self._points(points) - self.center
        rho = np.sqrt(np.asarray(np.sum(d * d, axis=-1)) + self.smoothing ** 2)
        e1 = np.exp(np.asarray(d @ self._alpha))
        e2 = np.exp(np.asarray(d @ self._beta))
        return d, rho, e1, e2

    def values(self, points) -> np.ndarray:
        _, rho, e1, e2 = self._terms(points)
        return 2.0 - 0.04 * (rho - self.smoothing) + e1 + e2

    def gradients(self, points) -> np.ndarray:
        d, rho, e1, e2 = self._terms(points)
        return -0.04 * d / rho[..., None] + e1[..., None] * self._alpha \
            + e2[..., None] * self._beta

    def hessians(self, points) -> np.ndarray:
        d, rho, e1, e2 = self._terms(points)
        cone = np.eye(2) / rho[..., None, None] - _outer(d, d) / rho[..., None, None] ** 3
        return -0.04 * cone + e1[..., None, None] * np.outer(self._alpha, self._alpha) \
            + e2[..., None, None] * np.outer(self._beta, self._beta)

    def params(self) -> dict:
        return {'source': self.center.tolist(), 'smoothing': self.smoothing}


@dataclass(frozen=True, eq=False)
class WeightedSumField(SignalField):
    '''
    Positive combination of fields of the same dimension. When all terms share
    one source that point is the unique maximum (each gradient is a positive
    definite multiple of the displacement); otherwise the source has to be
    located numerically and passed in, build_field does that.
    '''
    weights: Tuple[float, ...]
    terms: Tuple[SignalField, ...]
    located_source: np.ndarray = None

    kind = 'weighted-sum'

    def __post_init__(self):
        if not self.terms or len(self.weights) != len(self.terms):
            raise ValueError('weighted sum needs one weight per term')
        if any(w <= 0 for w in self.weights):
            raise ValueError('weights must be positive')
        if len({t.m for t in self.terms}) != 1:
            raise DimensionError('all terms of a weighted sum must share a dimension')
        object.__setattr__(self, 'weights', tuple(float(w) for w in self.weights))
        object.__setattr__(self, 'terms', tuple(self.terms))
        if self.located_source is not None:
            object.__setattr__(self, 'located_source',
                               as_point(self.located_source, self.terms[0].m))
        elif not self.shares_source:
            raise ValueError('terms have distinct sources, the maximizer must be passed as '
                             'located_source')

    @property
    def m(self) -> int:
        return self.terms[0].m

    @property
    def shares_source(self) -> bool:
        first = self.terms[0].source
        return all(np.allclose(t.source, first, rtol=0, atol=1e-12) for t in self.terms)

    @property
    def source(self) -> np.ndarray:
        if self.located_source is not None:
            return self.located_source.copy()
        return self.terms[0].source

    def values(self, points) -> np.ndarray:
        points = self._points(points)
        return sum(w * t.values(points) for w, t in zip(self.weights, self.terms))

    def gradients(self, points) -> np.ndarray:
        points = self._points(points)
        return sum(w * t.gradients(points) for w, t in zip(self.weights, self.terms))

    def hessians(self, points) -> np.ndarray:
        points = self._points(points)
        return sum(w * t.hessians(points) for w, t in zip(self.weights, self.terms))

    def params(self) -> dict:
        params = {'terms': [{'weight': w, 'field': t.to_spec()}
                            for w, t in zip(self.weights, self.terms)]}
        if self.located_source is not None:
            params['source'] = self.located_source.tolist()
        return params
