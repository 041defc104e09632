from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Extra, root_validator

from src.common.utils import ConfigError, DimensionError
from src.common.utils.io_tools import IOTools

from .density import DensitySpec, sample_density
from .model import Deployment, rectangle_corners
from .shapes import POLYHEDRA, regular_polygon, regular_polyhedron

AXES = ('x', 'y', 'z')


def save_csv(d: Deployment, path) -> Path:
    return IOTools.write_csv(path, AXES[:d.m], d.offsets.tolist())


def load_csv(path) -> Deployment:
    rows = IOTools.read_csv(path)
    if not rows:
        raise ConfigError(f'{path}: empty deployment file')
    header = [h.strip().lower() for h in rows[0]]
    if tuple(header) not in (AXES[:2], AXES[:3]):
        raise ConfigError(f'{path}: expected header x,y or x,y,z, got {",".join(rows[0])}')
    try:
        offsets = np.array([[float(v) for v in row] for row in rows[1:]])
    except ValueError as error:
        raise ConfigError(f'{path}: {error}')
    if offsets.ndim != 2 or offsets.shape[1] != len(header):
        raise ConfigError(f'{path}: every row needs {len(header)} values')
    return Deployment(offsets)


def to_json(d: Deployment) -> dict:
    return {'offsets': d.offsets.tolist()}


def from_json(data) -> Deployment:
    if isinstance(data, (str, Path)):
        data = IOTools.read_json(data)
    if not isinstance(data, dict) or 'offsets' not in data:
        raise ConfigError('deployment JSON needs an "offsets" list')
    try:
        return Deployment(data['offsets'])
    except (DimensionError, ValueError) as error:
        raise ConfigError(f'deployment: {error}')


class DeploymentSpec(BaseModel, extra=Extra.forbid):
    '''
    Formation given in a simulation config:
        polygon     n, radius, phase
        polyhedron  solid, radius
        rectangle   a, b (corner half sides)
        offsets     explicit list
        csv         path to an x,y[,z] file
    '''
    kind: Literal['polygon', 'polyhedron', 'rectangle', 'offsets', 'csv']
    n: Optional[int] = None
    radius: float = 1.0
    phase: float = 0.0
    solid: Optional[str] = None
    a: Optional[float] = None
    b: Optional[float] = None
    offsets: Optional[List[List[float]]] = None
    path: Optional[str] = None

    @root_validator(skip_on_failure=True)
    def check_parameters(cls, values):
        kind = values['kind']
        if kind == 'polygon' and values.get('n') is None:
            raise ValueError('a polygon formation needs n')
        if kind == 'polyhedron' and values.get('solid') not in POLYHEDRA:
            raise ValueError('solid must be one of {}'.format(', '.join(POLYHEDRA)))
        if kind == 'rectangle' and (values.get('a') is None or values.get('b') is None):
            raise ValueError('a rectangle formation needs a and b')
        if kind == 'offsets' and not values.get('offsets'):
            raise ValueError('an offsets formation needs a non-empty offsets list')
        if kind == 'csv' and not values.get('path'):
            raise ValueError('a csv formation needs a path')
        if values['radius'] <= 0:
            raise ValueError('radius must be positive')
        return values


def build_deployment(spec, base_dir: Optional[Path] = None) -> Deployment:
    '''
    Accepts a DeploymentSpec, a DensitySpec or the equivalent dicts. Relative
    csv paths are resolved against base_dir.
    '''
    if isinstance(spec, dict):
        model = DensitySpec if 'shape' in spec else DeploymentSpec
        spec = IOTools.parse_model(model, spec, 'deployment')
    if isinstance(spec, DensitySpec):
        return sample_density(spec)

    try:
        if spec.kind == 'polygon':
            return regular_polygon(spec.n, spec.radius, spec.phase)
        if spec.kind == 'polyhedron':
            return regular_polyhedron(spec.solid, spec.radius)
        if spec.kind == 'rectangle':
            return rectangle_corners(spec.a, spec.b)
        if spec.kind == 'offsets':
            return Deployment(spec.offsets)
    except DimensionError as error:
        raise ConfigError(f'deployment: {error}')

    path = Path(spec.path)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    return load_csv(path)
