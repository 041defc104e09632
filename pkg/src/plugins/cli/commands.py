from pathlib import Path
from typing import List, Optional, Sequence

import anyio
import numpy as np
from asyncer import asyncify, create_task_group
from loguru import logger

from src.common.config import plugin_config
from src.common.utils import ConfigError, SamplingError, SeekerError
from src.common.utils.io_tools import IOTools
from src.plugins.ascent import certify
from src.plugins.deployment import (Deployment, DensitySpec, from_json, from_positions,
                                    load_csv, moments, sample_positions)
from src.plugins.field import RegionSpec, load_field, region_bounds
from src.plugins.sim import (ARRIVED, DeathSchedule, MorphEvent, RunSummary, SimConfig,
                             initial_state, load_config, resolve_config_path, run)

from .manifest import ManifestWriter

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2
EXIT_NOT_CERTIFIED = 3

SWEEP_PARAMS = ('D', 'death-rate', 'morph-aspect')
SWEEP_HEADER = ['value', 'margin', 'certified', 'mean_angle', 'mean_divergence',
                'arrival_time', 'status', 'final_alive']


def load_deployment(path) -> Deployment:
    path = Path(path)
    if path.suffix.lower() == '.json':
        return from_json(path)
    return load_csv(path)


def cmd_simulate(config_path: str, out_dir, dump_every: Optional[int] = None) -> int:
    try:
        source = resolve_config_path(config_path)
        config = load_config(source)
        log, summary = run(config, base_dir=source.parent, dump_every=dump_every)
    except ConfigError as error:
        logger.error('simulate: {}', error)
        return EXIT_CONFIG

    writer = ManifestWriter('simulate', out_dir, str(source), config.canonical(), config.seed)
    writer.add(log.to_csv(writer.path('trajectory.csv')))
    writer.add(IOTools.write_json(writer.path('summary.json'), summary.dict()))
    if dump_every:
        writer.add(log.positions_to_csv(writer.path('positions.csv')))
        writer.add(log.readings_to_csv(writer.path('readings.csv')))
    writer.close()

    print('{}: {} at t={:.2f}, {} of {} robots alive, final distance {:.3f}'.format(
        config.name or source.stem, summary.status, summary.end_time, summary.final_alive,
        summary.initial_alive, summary.final_distance))
    return EXIT_OK if summary.status == ARRIVED else EXIT_FAILURE


def cmd_certify(deployment_path, field_path, region_path, grid: Optional[int] = None,
                json_path=None) -> int:
    try:
        d = load_deployment(deployment_path)
        field = load_field(field_path)
        region = IOTools.read_model(RegionSpec, region_path)
        bounds = region_bounds(field, region, grid)
        certificate = certify(d, bounds)
    except (ConfigError, ValueError) as error:
        logger.error('certify: {}', error)
        return EXIT_CONFIG

    print(certificate.table())
    print('grid {} -> {}, refinement change {:.2%}'.format(
        bounds.resolution, bounds.refined_resolution, bounds.refinement_change))
    if json_path:
        IOTools.write_json(json_path, certificate.dict())
    return EXIT_OK if certificate.holds else EXIT_NOT_CERTIFIED


def cmd_moments(spec_path, n: Optional[int] = None, seed: Optional[int] = None,
                json_path=None) -> int:
    try:
        spec = IOTools.read_model(DensitySpec, spec_path)
        update = {k: v for k, v in (('n', n), ('seed', seed)) if v is not None}
        spec = IOTools.parse_model(DensitySpec, {**spec.dict(), **update}, str(spec_path))
        p_c, d = from_positions(sample_positions(spec))
        report = moments(d, shift=p_c)
    except (ConfigError, SamplingError) as error:
        logger.error('moments: {}', error)
        return EXIT_CONFIG

    rows = [('N', report.n, None),
            ('m_XY', report.m_xy, report.se_xy),
            ('m_diff', report.m_diff, report.se_diff),
            ('VAR[X]', report.var_x, report.se_var_x),
            ('VAR[Y]', report.var_y, report.se_var_y)]
    print('{:<10}{:>16}'.format('shift', ', '.join('{:.6g}'.format(s) for s in report.shift)))
    for name, value, error in rows:
        if error is None:
            print('{:<10}{:>16}'.format(name, value))
        else:
            print('{:<10}{:>16.6g} +- {:.3g}'.format(name, value, error))
    if json_path:
        IOTools.write_json(json_path, report.to_dict())
    return EXIT_OK


def sweep_config(config: SimConfig, param: str, value: float) -> SimConfig:
    '''
    The base config with one parameter replaced
    '''
    if param == 'D':
        return config.copy(update={'formation_radius': value})
    if param == 'death-rate':
        deaths = config.schedule.deaths or DeathSchedule()
        deaths = IOTools.parse_model(DeathSchedule, {
            'probability': value, 'scripted': deaths.scripted}, 'death-rate')
        return config.copy(update={'schedule': config.schedule.copy(update={'deaths': deaths})})
    if param == 'morph-aspect':
        m = len(config.start)
        matrix = np.eye(m)
        matrix[0, 0] = value
        event = IOTools.parse_model(MorphEvent, {
            'time': 0.0, 'matrix': matrix.tolist(), 'duration': 0.0,
            'settle': config.stop.max_time}, 'morph-aspect')
        return config.copy(update={'schedule': config.schedule.copy(update={'morphs': [event]})})
    raise ConfigError('unknown sweep parameter {!r}, expected one of {}'.format(
        param, ', '.join(SWEEP_PARAMS)))


def initial_margin(config: SimConfig, base_dir=None):
    '''
    Certificate of the starting formation on the annulus between the stop
    radius and the start distance
    '''
    field, state = initial_state(config, base_dir)
    p_c, d = state.alive_deployment()
    distance = float(np.linalg.norm(p_c - field.source))
    inner = config.stop.epsilon if config.stop.epsilon is not None else 2.0 * d.D
    outer = distance + d.D
    if inner >= outer:
        return None
    region = RegionSpec(kind='annulus', center=field.source.tolist(), inner=inner, outer=outer)
    return certify(d, region_bounds(field, region))


async def _run_all(configs: Sequence[SimConfig], base_dir) -> List[RunSummary]:
    limiter = anyio.CapacityLimiter(plugin_config.sweep_concurrency)

    # errors travel back as values so one bad run surfaces as a ConfigError
    def summarize(config: SimConfig):
        try:
            return run(config, base_dir=base_dir)[1]
        except SeekerError as error:
            return error

    async with create_task_group() as task_group:
        soon = [task_group.soonify(asyncify(summarize, limiter=limiter))(c) for c in configs]
    results = [s.value for s in soon]
    for result in results:
        if isinstance(result, SeekerError):
            raise ConfigError(str(result))
    return results


def cmd_sweep(config_path: str, param: str, values: Sequence[float], out_dir) -> int:
    if not values:
        logger.error('sweep: empty values list')
        return EXIT_CONFIG
    try:
        source = resolve_config_path(config_path)
        base = load_config(source)
        configs = [sweep_config(base, param, v) for v in values]
        certificates = [initial_margin(c, source.parent) for c in configs]
        summaries = anyio.run(_run_all, configs, source.parent)
    except (ConfigError, SeekerError) as error:
        logger.error('sweep: {}', error)
        return EXIT_CONFIG

    rows = []
    for value, certificate, summary in zip(values, certificates, summaries):
        rows.append([
            float(value),
            certificate.margin if certificate is not None else float('nan'),
            int(certificate is not None and certificate.holds),
            summary.mean_angle_to_gradient if summary.mean_angle_to_gradient is not None else float('nan'),
            summary.mean_divergence if summary.mean_divergence is not None else float('nan'),
            summary.arrival_time if summary.arrival_time is not None else float('nan'),
            summary.status,
            summary.final_alive,
        ])
        logger.info('sweep {}={}: {}', param, value, summary.status)

    canonical = {'base': base.canonical(), 'param': param, 'values': [float(v) for v in values]}
    writer = ManifestWriter('sweep', out_dir, str(source), canonical, base.seed)
    writer.add(IOTools.write_csv(writer.path('sweep.csv'), SWEEP_HEADER, rows))
    writer.close()
    for row in rows:
        print(','.join(IOTools.format_cell(v) for v in row))
    return EXIT_OK
