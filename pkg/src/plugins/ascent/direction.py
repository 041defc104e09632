from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.common.config import plugin_config
from src.common.utils import DegenerateDeploymentError, DimensionError, angle_between, as_point
from src.plugins.deployment import Deployment
from src.plugins.field import SignalField


def _normalizer(d: Deployment) -> float:
    if d.D == 0:
        raise DegenerateDeploymentError('D = 0: every robot sits on the centroid, no direction')
    return d.N * d.D ** 2


def l_sigma(field: SignalField, p_c, d: Deployment) -> np.ndarray:
    '''
    (1 / (N D^2)) sum_i sigma(p_c + x_i) x_i, from field readings only
    '''
    scale = _normalizer(d)
    p_c = as_point(p_c, d.m)
    readings = field.values(d.positions(p_c))
    return np.sum(readings[:, None] * d.offsets, axis=0) / scale


def l1_sigma(field: SignalField, p_c, d: Deployment, form: str = 'shape') -> np.ndarray:
    '''
    First-order model of l_sigma, P(x) grad / (N D^2). form='sum' evaluates
    the same quantity as sum_i (grad . x_i) x_i / (N D^2).
    '''
    scale = _normalizer(d)
    grad = field.gradient(as_point(p_c, d.m))
    if form == 'shape':
        return d.shape.P @ grad / scale
    if form == 'sum':
        return np.sum((d.offsets @ grad)[:, None] * d.offsets, axis=0) / scale
    raise ValueError(f'unknown form {form!r}')


def is_reliable(L: np.ndarray, readings: np.ndarray, D: float, tol: Optional[float] = None) -> bool:
    tol = plugin_config.unreliable_tolerance if tol is None else tol
    scale = float(np.max(np.abs(readings))) / D if D > 0 else 0.0
    return bool(np.linalg.norm(L) >= tol * scale) and scale > 0


@dataclass
class AscentResult:
    L: np.ndarray
    L1: np.ndarray
    E: np.ndarray
    gradient: np.ndarray
    inner_L: float
    inner_L1: float
    angle: float
    r: np.ndarray
    theta: Optional[float]
    reliable: bool

    @property
    def divergence(self) -> float:
        return float(np.linalg.norm(self.E))

    def to_dict(self) -> dict:
        return {
            'L': self.L.tolist(), 'L1': self.L1.tolist(), 'E': self.E.tolist(),
            'gradient': self.gradient.tolist(), 'inner_L': self.inner_L,
            'inner_L1': self.inner_L1, 'angle': self.angle, 'r': self.r.tolist(),
            'theta': self.theta, 'reliable': self.reliable, 'divergence': self.divergence,
        }


def ascent(field: SignalField, p_c, d: Deployment) -> AscentResult:
    p_c = as_point(p_c, d.m)
    L = l_sigma(field, p_c, d)
    L1 = l1_sigma(field, p_c, d)
    grad = field.gradient(p_c)
    norm = np.linalg.norm(grad)
    r = grad / norm if norm > 0 else np.zeros_like(grad)
    theta = float(np.arctan2(grad[1], grad[0])) if d.m == 2 else None
    readings = field.values(d.positions(p_c))
    return AscentResult(L=L, L1=L1, E=L - L1, gradient=grad,
                        inner_L=float(grad @ L), inner_L1=float(grad @ L1),
                        angle=angle_between(L, grad), r=r, theta=theta,
                        reliable=is_reliable(L, readings, d.D))


def rectangle_closed_form(a: float, b: float, grad) -> np.ndarray:
    '''
    l1_sigma of the four corners (+-a, +-b) written out:
    |grad| / (a^2 + b^2) * (a^2 cos(theta), b^2 sin(theta))
    '''
    if a < 0 or b < 0:
        raise ValueError('rectangle half sides must be non-negative')
    if a == 0 and b == 0:
        raise DegenerateDeploymentError('a = b = 0 collapses the rectangle to a point')
    grad = as_point(grad, 2)
    theta = np.arctan2(grad[1], grad[0])
    scale = np.hypot(grad[0], grad[1]) / (a * a + b * b)
    return scale * np.array([a * a * np.cos(theta), b * b * np.sin(theta)])


def predict_affine(U, S, r) -> np.ndarray:
    '''
    Direction of l1_sigma after morphing a regular polygon/polyhedron with
    A = U S V^T: normalize(U S^2 U^T r). V plays no role.
    '''
    U = np.asarray(U, dtype=float)
    S = np.asarray(S, dtype=float)
    if S.ndim == 2:
        if np.any(np.abs(S - np.diag(np.diag(S))) > 0):
            raise ValueError('S must be diagonal')
        S = np.diag(S)
    m = U.shape[0]
    if U.shape != (m, m) or S.shape != (m,):
        raise DimensionError('U must be square and S must match it')
    if not np.allclose(U.T @ U, np.eye(m), rtol=0, atol=1e-10):
        raise ValueError('U must be orthogonal')
    if np.any(S < 0):
        raise ValueError('singular values must be non-negative')
    if not np.any(S > 0):
        raise DegenerateDeploymentError('S = 0 collapses the formation')
    r = as_point(r, m)
    if abs(np.linalg.norm(r) - 1.0) > 1e-9:
        raise ValueError('r must be a unit vector')

    direction = U @ (S ** 2 * (U.T @ r))
    norm = np.linalg.norm(direction)
    if norm == 0:
        raise DegenerateDeploymentError('the morph hides the gradient direction entirely')
    return direction / norm


def variance_direction(var_x: float, var_y: float, grad) -> np.ndarray:
    '''
    Continuum l1_sigma of a density with m_XY = 0: proportional to
    (VAR[X] cos(theta), VAR[Y] sin(theta)). Returned as a unit vector.
    '''
    if var_x < 0 or var_y < 0:
        raise ValueError('variances must be non-negative')
    if var_x == 0 and var_y == 0:
        raise DegenerateDeploymentError('both variances are zero')
    grad = as_point(grad, 2)
    theta = np.arctan2(grad[1], grad[0])
    direction = np.array([var_x * np.cos(theta), var_y * np.sin(theta)])
    norm = np.linalg.norm(direction)
    if norm == 0:
        raise DegenerateDeploymentError('the gradient lies along the zero-variance axis')
    return direction / norm
