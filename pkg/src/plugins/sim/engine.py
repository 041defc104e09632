from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from src.common.config import plugin_config
from src.common.utils import (ConfigError, DegenerateDeploymentError, DimensionError,
                              SeekerError)
from src.plugins.ascent import l_sigma
from src.plugins.deployment import (Deployment, DensitySpec, build_deployment,
                                    is_non_degenerate, sample_positions)
from src.plugins.field import SignalField, build_field

from .config import EventSchedule, MorphEvent, Obstacle, SimConfig, StopCondition
from .controller import unit_speed_controller
from .model import (ALL_DEAD, ARRIVED, DEGENERATE, RUNNING, STOPPED, TIMEOUT, MorphPlan,
                    Probe, RunSummary, SimState, TrajectoryLog)

# slack on event times compared against the step clock
TIME_SLACK = 1e-9


def steps_per_period(period: float, dt: float) -> int:
    return max(1, int(round(period / dt)))


def _start_morph(state: SimState, target: np.ndarray, duration: float, settle: float):
    origin = state.morph.reference(state.t) if state.morph is not None else state.x_ref
    state.morph = MorphPlan(start=state.t, duration=duration, settle=settle,
                            origin=np.array(origin), target=target)
    logger.info('t={:.2f}: morph started, duration {} settle {}', state.t, duration, settle)
    return state


def morph(state: SimState, A, duration: float, settle: float = 0.0) -> SimState:
    '''
    Move the reference formation linearly from where it is now to A x_ref0
    over duration time units; formation keeping stays on for settle more.
    '''
    A = np.asarray(A, dtype=float)
    if A.shape != (state.m, state.m):
        raise DimensionError('morph matrix must be {0}x{0}'.format(state.m))
    singular = np.linalg.svd(A, compute_uv=False)
    if singular[-1] <= 1e-12 * max(singular[0], 1.0):
        raise DegenerateDeploymentError('morph matrix is singular')
    return _start_morph(state, state.x_ref0 @ A.T, duration, settle)


def morph_to_density(state: SimState, spec: DensitySpec, duration: float,
                     settle: float = 0.0) -> SimState:
    '''
    Sample a formation for the alive robots and hand the targets out by a
    minimum total squared travel assignment.
    '''
    if state.m != 2:
        raise DimensionError('density targets are planar')
    alive = np.flatnonzero(state.alive)
    sample = sample_positions(spec.copy(update={'n': len(alive)}))
    sample = sample - sample.mean(axis=0)
    current = state.positions[alive] - state.positions[alive].mean(axis=0)
    rows, cols = linear_sum_assignment(cdist(current, sample, 'sqeuclidean'))
    target = np.array(state.morph.reference(state.t) if state.morph is not None else state.x_ref)
    target[alive[rows]] = sample[cols]
    return _start_morph(state, target, duration, settle)


def shape_correction(state: SimState, gain: float, p_c: np.ndarray) -> np.ndarray:
    '''
    k_f (p_c + x_ref_i - p_i) for the alive robots while a morph is active,
    the reference re-centered over the robots still alive; zero otherwise.
    '''
    alive = state.alive
    if state.morph is None or not state.morph.active(state.t):
        return np.zeros((int(alive.sum()), state.m))
    state.x_ref = state.morph.reference(state.t)
    reference = state.x_ref[alive]
    reference = reference - reference.mean(axis=0)
    return gain * (p_c + reference - state.positions[alive])


def _trigger_morphs(state: SimState, morphs: List[MorphEvent]):
    while state.next_morph < len(morphs) and morphs[state.next_morph].time <= state.t + TIME_SLACK:
        event = morphs[state.next_morph]
        state.next_morph += 1
        if event.matrix is not None:
            morph(state, event.matrix, event.duration, event.settle)
        else:
            morph_to_density(state, event.density, event.duration, event.settle)


def _resample_noise(state: SimState, max_deviation: float):
    state.noise = state.rng.uniform(-max_deviation, max_deviation, state.N)
    if state.m == 3:
        state.noise_axes = state.rng.normal(size=(state.N, 3))


def _noisy_velocities(state: SimState, u: np.ndarray) -> np.ndarray:
    eta = state.noise[state.alive]
    c, s = np.cos(eta), np.sin(eta)
    if state.m == 2:
        return np.stack([c * u[0] - s * u[1], s * u[0] + c * u[1]], axis=1)

    if state.noise_axes is None:
        return np.tile(u, (len(eta), 1))
    # rotate about an axis perpendicular to u
    k = np.cross(u, state.noise_axes[state.alive])
    norms = np.linalg.norm(k, axis=1)
    k = np.where(norms[:, None] > 0, k / np.where(norms > 0, norms, 1.0)[:, None], 0.0)
    return c[:, None] * u + s[:, None] * np.cross(k, u)


def _apply_deaths(state: SimState, schedule: EventSchedule, dt: float, initial: int):
    deaths = schedule.deaths
    if deaths is None:
        return
    before = state.alive.copy()
    for robot, when in deaths.scripted.items():
        if 0 <= robot < state.N and when <= state.t + TIME_SLACK:
            state.alive[robot] = False

    period = schedule.period
    if state.step_index % steps_per_period(period, dt) == 0:
        p = deaths.per_period(initial, period)
        if p > 0:
            state.alive &= ~(state.rng.random(state.N) < p)

    newly = before & ~state.alive
    if newly.any():
        state.death_times[newly] = state.t
        logger.info('t={:.2f}: {} robot(s) stopped working, {} alive',
                    state.t, int(newly.sum()), state.alive_count)


def _probe(field: SignalField, state: SimState, p_c: np.ndarray, d: Deployment,
           L: np.ndarray, readings: np.ndarray, stop: StopCondition) -> Probe:
    gradient = field.gradient(p_c)
    scale = d.N * d.D ** 2
    L1 = d.shape.P @ gradient / scale if scale > 0 else np.zeros(d.m)
    eig = d.shape.eigenvalues
    source = field.source
    return Probe(t=state.t, p_c=p_c, alive_count=d.N, readings=readings,
                 robots=np.flatnonzero(state.alive),
                 spreads=np.linalg.norm(d.offsets, axis=1), L=L, gradient=gradient, L1=L1,
                 sigma_pc=field.eval(p_c), distance=float(np.linalg.norm(p_c - source)),
                 epsilon=stop.epsilon if stop.epsilon is not None else 2.0 * d.D,
                 rank_ratio=float(eig[0] / eig[-1]) if eig[-1] > 0 else 0.0)


def step(state: SimState, field: SignalField, schedule: EventSchedule, dt: float,
         stop: Optional[StopCondition] = None) -> SimState:
    '''
    One explicit Euler step p_i <- p_i + dt (R(eta_i) u + correction_i).
    The state is advanced in place and returned; state.probe holds what the
    swarm saw before moving.
    '''
    if state.status != RUNNING:
        return state
    if dt <= 0:
        raise ConfigError('dt must be positive')
    stop = stop or StopCondition()
    initial = state.N

    _trigger_morphs(state, schedule.morphs)
    if schedule.noise is not None and state.step_index % steps_per_period(schedule.period, dt) == 0:
        _resample_noise(state, schedule.noise.max_deviation)

    try:
        command = unit_speed_controller(field, state)
    except DegenerateDeploymentError as error:
        state.degenerate_steps += 1
        p_c, d = state.alive_deployment()
        readings = field.values(d.positions(p_c))
        L = l_sigma(field, p_c, d) if d.D > 0 else np.zeros(d.m)
        state.probe = _probe(field, state, p_c, d, L, readings, stop)
        if state.last_direction is None or state.fallback >= plugin_config.fallback_steps:
            state.status = DEGENERATE
            logger.error('t={:.2f}: {}, no fallback left', state.t, error)
            state.warnings.append('t={:.2f}: aborted on a degenerate swarm'.format(state.t))
            return state
        if state.fallback == 0:
            logger.warning('t={:.2f}: {}, reusing the last direction', state.t, error)
            state.warnings.append('t={:.2f}: degenerate alive deployment'.format(state.t))
        state.fallback += 1
        u, halt = state.last_direction, False
    else:
        state.fallback = 0
        p_c, d = command.p_c, command.deployment
        state.probe = _probe(field, state, p_c, d, command.L, command.readings, stop)
        u, halt = command.u, command.stop

    probe = state.probe
    if probe.distance <= probe.epsilon:
        state.status = ARRIVED
        logger.info('t={:.2f}: centroid within {:.3g} of the source, {} robots alive',
                    state.t, probe.epsilon, state.alive_count)
        return state
    if halt:
        state.status = STOPPED
        state.controller_stop = True
        logger.warning('t={:.2f}: direction unreliable at distance {:.3g}, swarm stops',
                       state.t, probe.distance)
        return state
    if state.t >= stop.max_time - TIME_SLACK:
        state.status = TIMEOUT
        logger.warning('t={:.2f}: time limit reached at distance {:.3g}', state.t, probe.distance)
        return state

    state.last_direction = u
    velocity = _noisy_velocities(state, u) + shape_correction(state, schedule.shape_gain, p_c)
    positions = state.positions.copy()
    positions[state.alive] += dt * velocity
    state.positions = positions
    state.step_index += 1
    state.t = state.step_index * dt

    _apply_deaths(state, schedule, dt, initial)
    if state.alive_count == 0:
        state.status = ALL_DEAD
        logger.error('t={:.2f}: every robot has stopped working', state.t)
    return state


def obstacle_intrusions(state: SimState, obstacles: List[Obstacle]) -> int:
    count = 0
    alive = state.positions[state.alive]
    for obstacle in obstacles:
        distance = np.linalg.norm(alive - np.asarray(obstacle.center, dtype=float), axis=1)
        count += int(np.sum(distance < obstacle.radius))
    return count


def initial_state(config: SimConfig, base_dir: Optional[Path] = None) -> Tuple[SignalField, SimState]:
    field = build_field(config.field)
    d = build_deployment(config.deployment or config.density_spec, base_dir)
    if config.formation_radius is not None:
        try:
            d = d.with_radius(config.formation_radius)
        except DimensionError as error:
            raise ConfigError(f'formation_radius: {error}')
    if d.m != field.m:
        raise ConfigError('field is {}-dimensional, formation is {}-dimensional'.format(field.m, d.m))
    if d.N <= d.m:
        raise ConfigError('{} robots cannot span R^{}: need N > m'.format(d.N, d.m))
    if not is_non_degenerate(d):
        raise ConfigError('the initial formation is degenerate')
    if len(config.start) != d.m:
        raise ConfigError('start must have {} coordinates'.format(d.m))
    for obstacle in config.schedule.obstacles:
        if len(obstacle.center) != d.m:
            raise ConfigError('obstacle centers must have {} coordinates'.format(d.m))
    for event in config.schedule.morphs:
        if event.matrix is not None and len(event.matrix) != d.m:
            raise ConfigError('morph matrices must be {0}x{0}'.format(d.m))
    deaths = config.schedule.deaths
    if deaths is not None:
        unknown = sorted(r for r in deaths.scripted if not 0 <= r < d.N)
        if unknown:
            raise ConfigError('scripted deaths name robots {} outside 0..{}'.format(unknown, d.N - 1))
    return field, SimState.initial(config.start, d, config.seed)


def run(config: SimConfig, base_dir: Optional[Path] = None,
        dump_every: Optional[int] = None) -> Tuple[TrajectoryLog, RunSummary]:
    field, state = initial_state(config, base_dir)
    schedule, stop = config.schedule, config.stop
    log = TrajectoryLog(m=state.m)
    initial_alive = state.N
    logger.info('run {}: {} robots, start {}, seed {}', config.name or '<unnamed>',
                state.N, config.start, config.seed)

    min_distance, min_rank_ratio = np.inf, np.inf
    violations, first_violation = 0, None
    try:
        while state.status == RUNNING:
            index = state.step_index
            if dump_every and index % dump_every == 0:
                log.dump_positions(state)
            step(state, field, schedule, config.dt, stop)
            probe = state.probe
            if probe is not None and probe.t == index * config.dt:
                min_distance = min(min_distance, probe.distance)
                min_rank_ratio = min(min_rank_ratio, probe.rank_ratio)
                if index % config.log_every == 0 or state.status != RUNNING:
                    log.record(probe)
            if schedule.obstacles and state.status == RUNNING:
                count = obstacle_intrusions(state, schedule.obstacles)
                if count and first_violation is None:
                    first_violation = state.t
                    logger.warning('t={:.2f}: {} robot(s) inside an obstacle', state.t, count)
                violations += count
    except SeekerError as error:
        raise ConfigError(f'run {config.name}: {error}')
    if dump_every:
        log.dump_positions(state)

    angles = log.column('angle_to_gradient')
    divergence = log.column('divergence')
    final = state.probe
    summary = RunSummary(
        name=config.name, status=state.status, arrived=state.status == ARRIVED,
        controller_stop=state.controller_stop,
        arrival_time=state.t if state.status == ARRIVED else None,
        end_time=state.t, steps=state.step_index, source=field.source.tolist(),
        epsilon=final.epsilon if final is not None else 0.0,
        initial_alive=initial_alive, final_alive=state.alive_count,
        deaths=initial_alive - state.alive_count,
        min_distance=float(min_distance), final_distance=final.distance if final is not None else float('nan'),
        min_rank_ratio=float(min_rank_ratio), degenerate_steps=state.degenerate_steps,
        obstacle_violations=violations, first_violation_time=first_violation,
        mean_angle_to_gradient=_nanmean(angles), mean_divergence=_nanmean(divergence),
        warnings=state.warnings)
    logger.info('run {}: {} at t={:.2f}, {} of {} robots alive', config.name or '<unnamed>',
                summary.status, summary.end_time, summary.final_alive, initial_alive)
    return log, summary


def _nanmean(values: np.ndarray) -> Optional[float]:
    values = values[np.isfinite(values)]
    return float(values.mean()) if values.size else None
