from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from src.common.config import plugin_config
from src.common.utils import DimensionError

# relative size of a mean that still counts as centred
CENTERED_TOLERANCE = 1e-14


@dataclass(frozen=True)
class ShapeMatrix:
    '''
    P(x) = sum_i x_i x_i^T with its ascending eigenvalues
    '''
    P: np.ndarray
    eigenvalues: np.ndarray
    rank: int

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def condition(self) -> float:
        return self.lambda_max / self.lambda_min if self.lambda_min > 0 else float('inf')


@dataclass(frozen=True, eq=False)
class Deployment:
    '''
    Robot offsets x_i relative to the swarm centroid, one row per robot.
    The offsets are re-centered on construction.
    '''
    offsets: np.ndarray

    def __post_init__(self):
        offsets = np.array(self.offsets, dtype=float)
        if offsets.ndim != 2 or offsets.shape[0] < 1:
            raise DimensionError('offsets must be a non-empty (N, m) array')
        if offsets.shape[1] not in (2, 3):
            raise DimensionError('deployments live in 2D or 3D, got m={}'.format(offsets.shape[1]))
        # already-centred offsets are kept bit for bit
        mean = offsets.mean(axis=0)
        if np.abs(mean).max() > CENTERED_TOLERANCE * max(float(np.abs(offsets).max()), 1.0):
            offsets = offsets - mean
        offsets.setflags(write=False)
        object.__setattr__(self, 'offsets', offsets)

    @property
    def N(self) -> int:
        return self.offsets.shape[0]

    @property
    def m(self) -> int:
        return self.offsets.shape[1]

    @cached_property
    def D(self) -> float:
        return float(np.linalg.norm(self.offsets, axis=1).max())

    @cached_property
    def shape(self) -> ShapeMatrix:
        P = self.offsets.T @ self.offsets
        P = (P + P.T) / 2
        eigenvalues = np.linalg.eigvalsh(P)
        top = eigenvalues[-1]
        tol = plugin_config.degenerate_tolerance
        rank = int(np.sum(eigenvalues > tol * top)) if top > 0 else 0
        return ShapeMatrix(P=P, eigenvalues=eigenvalues, rank=rank)

    def scaled(self, factor: float) -> 'Deployment':
        return Deployment(self.offsets * factor)

    def with_radius(self, D: float) -> 'Deployment':
        if self.D == 0:
            raise DimensionError('cannot rescale a deployment with D = 0')
        return self.scaled(D / self.D)

    def positions(self, p_c) -> np.ndarray:
        return np.asarray(p_c, dtype=float) + self.offsets


def from_positions(positions) -> Tuple[np.ndarray, Deployment]:
    positions = np.array(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] == 0:
        raise DimensionError('expected a non-empty (N, m) array of positions')
    p_c = positions.mean(axis=0)
    return p_c, Deployment(positions - p_c)


def is_non_degenerate(d: Deployment, tol: Optional[float] = None) -> bool:
    '''
    Full rank of P, tested as an eigenvalue ratio: lambda_min > tol * lambda_max
    '''
    tol = plugin_config.degenerate_tolerance if tol is None else tol
    shape = d.shape
    return shape.lambda_max > 0 and shape.lambda_min > tol * shape.lambda_max


def affine_transform(d: Deployment, A) -> Deployment:
    A = np.asarray(A, dtype=float)
    if A.shape != (d.m, d.m):
        raise DimensionError('affine map must be {0}x{0}, got {1}'.format(d.m, A.shape))
    return Deployment(d.offsets @ A.T)


def rectangle_corners(a: float, b: float) -> Deployment:
    return Deployment([[a, b], [-a, b], [-a, -b], [a, -b]])


@dataclass(frozen=True)
class MomentReport:
    '''
    Discrete estimates of the density moments that decide whether L1 is
    parallel to the gradient, with standard errors of the mean.
    '''
    n: int
    m_xy: float
    m_diff: float
    var_x: float
    var_y: float
    se_xy: float
    se_diff: float
    se_var_x: float
    se_var_y: float
    shift: Tuple[float, float] = (0.0, 0.0)

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def moments(d: Deployment, shift=None) -> MomentReport:
    if d.m != 2:
        raise DimensionError('moments are defined for planar deployments')
    X, Y = d.offsets[:, 0], d.offsets[:, 1]
    n = d.N
    root = np.sqrt(n)

    def mean_and_error(values: np.ndarray):
        error = float(values.std(ddof=1) / root) if n > 1 else 0.0
        return float(values.mean()), error

    m_xy, se_xy = mean_and_error(X * Y)
    m_diff, se_diff = mean_and_error(X * X - Y * Y)
    var_x, se_var_x = mean_and_error(X * X)
    var_y, se_var_y = mean_and_error(Y * Y)
    shift = (0.0, 0.0) if shift is None else tuple(float(s) for s in shift)
    return MomentReport(n=n, m_xy=m_xy, m_diff=m_diff, var_x=var_x, var_y=var_y,
                        se_xy=se_xy, se_diff=se_diff, se_var_x=se_var_x,
                        se_var_y=se_var_y, shift=shift)
