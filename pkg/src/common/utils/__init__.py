import numpy as np


class SeekerError(Exception):
    pass


class ConfigError(SeekerError):
    '''
    Malformed input document or parameters; the CLI maps it to exit code 1
    '''


class DimensionError(SeekerError, ValueError):
    pass


class DegenerateDeploymentError(SeekerError):
    pass


class SamplingError(SeekerError):
    pass


class RegionError(SeekerError, ValueError):
    '''
    A robot lies outside the region a bound was computed on
    '''


def angle_between(u, v) -> float:
    '''
    Angle in radians between two vectors, atan2 of the cross/dot pair in 2D and
    Kahan's half-angle form otherwise, both accurate near 0. Zero vectors give nan.
    '''
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return float('nan')
    if u.shape[-1] == 2:
        cross = u[0] * v[1] - u[1] * v[0]
        return float(abs(np.arctan2(cross, float(u @ v))))
    a = u * nv
    b = v * nu
    return float(2.0 * np.arctan2(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def as_point(a, m: int) -> np.ndarray:
    point = np.asarray(a, dtype=float)
    if point.shape != (m,):
        raise DimensionError(
            'expected a point of dimension {}, got shape {}'.format(m, point.shape))
    return point
