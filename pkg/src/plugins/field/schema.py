from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Extra, validator

from src.common.utils import ConfigError, DimensionError
from src.common.utils.io_tools import IOTools

from .model import (GaussianField, NonconvexField, SignalField,
                    SmoothedPowerLawField, WeightedSumField)
from .region import locate_maximizer

FIELD_KINDS = ('gaussian', 'smoothed-power-law', 'nonconvex', 'weighted-sum')


class FieldSpec(BaseModel, extra=Extra.forbid):
    kind: str
    params: Dict[str, Any] = {}

    @validator('kind')
    def known_kind(cls, kind):
        if kind not in FIELD_KINDS:
            raise ValueError('unknown field kind {!r}, expected one of {}'.format(
                kind, ', '.join(FIELD_KINDS)))
        return kind


class GaussianParams(BaseModel, extra=Extra.forbid):
    amplitude: float = 1.0
    center: List[float]
    shape: Optional[List[List[float]]] = None


class PowerLawParams(BaseModel, extra=Extra.forbid):
    strength: float = 1.0
    center: List[float]
    smoothing: float = 1.0


class NonconvexParams(BaseModel, extra=Extra.forbid):
    source: List[float] = [40.0, 40.0]
    smoothing: float = 1.0


class WeightedTerm(BaseModel, extra=Extra.forbid):
    weight: float = 1.0
    field: FieldSpec


class WeightedSumParams(BaseModel, extra=Extra.forbid):
    terms: List[WeightedTerm]
    source: Optional[List[float]] = None

    @validator('terms')
    def non_empty(cls, terms):
        if not terms:
            raise ValueError('a weighted sum needs at least one term')
        return terms


def build_field(spec) -> SignalField:
    '''
    Build a field from a FieldSpec, a plain {"kind", "params"} dict or a field
    that is already built.
    '''
    if isinstance(spec, SignalField):
        return spec
    if not isinstance(spec, FieldSpec):
        spec = IOTools.parse_model(FieldSpec, spec, 'field')

    try:
        if spec.kind == 'gaussian':
            p = IOTools.parse_model(GaussianParams, spec.params, 'field.params')
            shape = p.shape if p.shape is not None else [
                [1.0 if i == j else 0.0 for j in range(len(p.center))] for i in range(len(p.center))]
            return GaussianField(p.amplitude, p.center, shape)

        if spec.kind == 'smoothed-power-law':
            p = IOTools.parse_model(PowerLawParams, spec.params, 'field.params')
            return SmoothedPowerLawField(p.strength, p.center, p.smoothing)

        if spec.kind == 'nonconvex':
            p = IOTools.parse_model(NonconvexParams, spec.params, 'field.params')
            return NonconvexField(tuple(p.source), p.smoothing)

        p = IOTools.parse_model(WeightedSumParams, spec.params, 'field.params')
        terms = tuple(build_field(t.field) for t in p.terms)
        weights = tuple(t.weight for t in p.terms)
        if len({t.m for t in terms}) != 1:
            raise DimensionError('all terms of a weighted sum must share a dimension')
        sources = np.array([t.source for t in terms])
        if p.source is not None or np.ptp(sources, axis=0).max() <= 1e-12:
            return WeightedSumField(weights, terms, p.source)
        # search from the weighted mean of the term sources
        guess = np.average(sources, axis=0, weights=weights)
        margin = np.ptp(sources, axis=0).max() + 10.0
        report = locate_maximizer(WeightedSumField(weights, terms, guess),
                                  sources.min(axis=0) - margin, sources.max(axis=0) + margin)
        return WeightedSumField(weights, terms, report.point)
    except (ValueError, DimensionError) as error:
        raise ConfigError(f'field ({spec.kind}): {error}')


def load_field(path) -> SignalField:
    return build_field(IOTools.read_model(FieldSpec, path))
