from dataclasses import dataclass

import numpy as np

from src.common.utils import DegenerateDeploymentError
from src.plugins.ascent import is_reliable, l_sigma
from src.plugins.deployment import Deployment, is_non_degenerate
from src.plugins.field import SignalField

from .model import SimState


@dataclass
class Command:
    '''
    The common velocity every alive robot is told to follow
    '''
    u: np.ndarray
    L: np.ndarray
    readings: np.ndarray
    p_c: np.ndarray
    deployment: Deployment
    stop: bool


def unit_speed_controller(field: SignalField, state: SimState) -> Command:
    '''
    u = L_sigma / |L_sigma| over the alive robots. The robots only report
    their readings; an unreliable L_sigma turns into a stop command.
    '''
    if state.alive_count == 0:
        raise DegenerateDeploymentError('no robot left alive')
    p_c, d = state.alive_deployment()
    if d.D == 0 or not is_non_degenerate(d):
        raise DegenerateDeploymentError(
            'alive deployment of {} robot(s) does not span R^{}'.format(d.N, d.m))

    readings = field.values(d.positions(p_c))
    L = l_sigma(field, p_c, d)
    if not is_reliable(L, readings, d.D):
        return Command(u=np.zeros(d.m), L=L, readings=readings, p_c=p_c, deployment=d, stop=True)
    return Command(u=L / np.linalg.norm(L), L=L, readings=readings, p_c=p_c,
                   deployment=d, stop=False)
