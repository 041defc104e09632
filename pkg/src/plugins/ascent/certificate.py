from typing import List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel

from src.common.utils import DimensionError, RegionError, as_point
from src.plugins.deployment import Deployment, is_non_degenerate
from src.plugins.field import RegionBounds, RegionSpec, SignalField

from .direction import l1_sigma, l_sigma


class DivergenceReport(BaseModel):
    '''
    |L - L1| against the bound M D it can never exceed inside the region
    '''
    lhs: float
    rhs: float
    ok: bool
    slack: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else float('inf')


def _same_dimension(d: Deployment, bounds: RegionBounds):
    if bounds.region.m != d.m:
        raise DimensionError('deployment is {}-dimensional, bounds were sampled in {}D'.format(
            d.m, bounds.region.m))


def divergence_check(field: SignalField, p_c, d: Deployment, bounds: RegionBounds) -> DivergenceReport:
    _same_dimension(d, bounds)
    p_c = as_point(p_c, d.m)
    positions = d.positions(p_c)
    outside = ~bounds.region.contains(positions)
    if outside.any():
        raise RegionError('{} robot(s) outside the bounded region, the divergence bound '
                          'does not apply'.format(int(outside.sum())))
    lhs = float(np.linalg.norm(l_sigma(field, p_c, d) - l1_sigma(field, p_c, d)))
    rhs = bounds.m_bound * d.D
    return DivergenceReport(lhs=lhs, rhs=rhs, ok=lhs <= rhs * (1.0 + 1e-9), slack=rhs - lhs)


def conditioning(d: Deployment) -> float:
    '''
    C(x) = max(lambda_max / (N D^2), N D^2 / lambda_min); infinite when degenerate
    '''
    if d.D == 0 or not is_non_degenerate(d):
        return float('inf')
    scale = d.N * d.D ** 2
    return max(d.shape.lambda_max / scale, scale / d.shape.lambda_min)


class Certificate(BaseModel):
    region: RegionSpec
    n: int
    D: float
    lambda_min: float
    k_min: float
    m_bound: float
    margin: float
    holds: bool
    f_lower_bound: float
    conditioning: Optional[float] = None
    warnings: List[str] = []

    def table(self) -> str:
        rows = [
            ('lambda_min', self.lambda_min),
            ('N', self.n),
            ('D', self.D),
            ('K_min', self.k_min),
            ('M_S', self.m_bound),
            ('F_S bound', self.f_lower_bound),
            ('C(x)', self.conditioning if self.conditioning is not None else float('inf')),
            ('margin', self.margin),
        ]
        lines = ['{:<12}{:>16.6g}'.format(name, value) for name, value in rows]
        lines.append('{:<12}{:>16}'.format('certified', 'yes' if self.holds else 'no'))
        lines += ['warning: {}'.format(w) for w in self.warnings]
        return '\n'.join(lines)


def certify(d: Deployment, bounds: RegionBounds) -> Certificate:
    '''
    lambda_min / (N D^2) * K_min - M D > 0 makes l_sigma an ascending
    direction at every centroid of the region whose robots stay inside it.
    '''
    _same_dimension(d, bounds)
    warnings = list(bounds.warnings)
    degenerate = d.D == 0 or not is_non_degenerate(d)
    lambda_min = 0.0 if degenerate else d.shape.lambda_min
    if degenerate:
        warnings.append('degenerate deployment, lambda_min taken as 0')

    scale = d.N * d.D ** 2
    first = lambda_min / scale * bounds.k_min if scale > 0 else 0.0
    margin = first - bounds.m_bound * d.D
    f_bound = lambda_min / scale * bounds.k_min ** 2 if scale > 0 else 0.0
    C = conditioning(d)

    certificate = Certificate(
        region=bounds.region, n=d.N, D=d.D, lambda_min=lambda_min, k_min=bounds.k_min,
        m_bound=bounds.m_bound, margin=margin, holds=margin > 0, f_lower_bound=f_bound,
        conditioning=None if np.isinf(C) else C, warnings=warnings)
    logger.debug('certify: N={} D={:.4g} margin={:.4g} holds={}', d.N, d.D, margin, certificate.holds)
    return certificate


def certified_radius(d: Deployment, bounds: RegionBounds) -> float:
    '''
    Largest D at which the shape of d still certifies on the region: the
    margin is linear in D, lambda_min / (N D^2) being scale free.
    '''
    _same_dimension(d, bounds)
    if d.D == 0 or not is_non_degenerate(d):
        return 0.0
    if bounds.m_bound == 0:
        return float('inf')
    ratio = d.shape.lambda_min / (d.N * d.D ** 2)
    return ratio * bounds.k_min / bounds.m_bound
