import itertools
import math

import numpy as np

from src.common.utils import ConfigError

from .model import Deployment

PHI = (1.0 + math.sqrt(5.0)) / 2.0

POLYHEDRA = ('tetrahedron', 'octahedron', 'cube', 'icosahedron', 'dodecahedron')


def regular_polygon(N: int, radius: float, phase: float = 0.0) -> Deployment:
    if N < 3:
        raise ConfigError('a regular polygon needs at least 3 vertices, got {}'.format(N))
    angles = phase + 2.0 * np.pi * np.arange(N) / N
    return Deployment(radius * np.stack([np.cos(angles), np.sin(angles)], axis=1))


def _cyclic(point):
    # the three cyclic permutations of (a, b, c)
    a, b, c = point
    return [(a, b, c), (b, c, a), (c, a, b)]


def _signed(values):
    '''
    Every sign combination of the non-zero coordinates
    '''
    slots = [(v, -v) if v != 0 else (0.0,) for v in values]
    return [tuple(p) for p in itertools.product(*slots)]


def _vertices(kind: str) -> np.ndarray:
    cube = _signed((1.0, 1.0, 1.0))
    if kind == 'cube':
        return np.array(cube)
    if kind == 'tetrahedron':
        return np.array([p for p in cube if p[0] * p[1] * p[2] > 0])
    if kind == 'octahedron':
        return np.array([p for base in _cyclic((1.0, 0.0, 0.0)) for p in _signed(base)])
    if kind == 'icosahedron':
        return np.array([p for base in _cyclic((0.0, 1.0, PHI)) for p in _signed(base)])
    if kind == 'dodecahedron':
        rest = [p for base in _cyclic((0.0, 1.0 / PHI, PHI)) for p in _signed(base)]
        return np.array(cube + rest)
    raise ConfigError('unknown polyhedron {!r}, expected one of {}'.format(kind, ', '.join(POLYHEDRA)))


def regular_polyhedron(kind: str, radius: float) -> Deployment:
    '''
    Vertices of a Platonic solid centered at the origin with the given
    circumradius, in the usual axis-aligned orientation
    '''
    vertices = _vertices(kind)
    norm = np.linalg.norm(vertices[0])
    return Deployment(vertices * (radius / norm))
