import argparse
import sys
from typing import List, Optional

from loguru import logger

from src.common.config import VERSION, plugin_config

from .commands import (EXIT_CONFIG, SWEEP_PARAMS, cmd_certify, cmd_moments, cmd_simulate,
                       cmd_sweep, sweep_config)
from .manifest import ManifestWriter, RunManifest


def _values(text: str) -> List[float]:
    try:
        return [float(v) for v in text.replace(',', ' ').split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a list of numbers: {text!r}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='seek', description='Gradient-free source seeking for robot swarms')
    parser.add_argument('--version', action='version', version=VERSION)
    parser.add_argument('--log-level', default=plugin_config.log_level,
                        help='loguru level for messages on stderr')
    commands = parser.add_subparsers(dest='command', required=True)

    simulate = commands.add_parser('simulate', help='run one simulation config or preset')
    simulate.add_argument('--config', required=True, help='JSON config path or preset name')
    simulate.add_argument('--out', required=True, help='output directory')
    simulate.add_argument('--dump-every', type=int, default=None,
                          help='write every robot position each k steps to positions.csv')

    certify = commands.add_parser('certify', help='check the ascent certificate of a deployment')
    certify.add_argument('--deployment', required=True, help='x,y[,z] CSV or {"offsets"} JSON')
    certify.add_argument('--field', required=True, help='field JSON')
    certify.add_argument('--region', required=True, help='region JSON')
    certify.add_argument('--grid', type=int, default=None, help='grid points per axis')
    certify.add_argument('--json', default=None, help='write the certificate here')

    sweep = commands.add_parser('sweep', help='rerun a config over a list of values')
    sweep.add_argument('--config', required=True, help='JSON config path or preset name')
    sweep.add_argument('--param', required=True, choices=SWEEP_PARAMS)
    sweep.add_argument('--values', required=True, type=_values, help='e.g. 0.1,1,10')
    sweep.add_argument('--out', default='sweep_out', help='output directory')

    moments = commands.add_parser('moments', help='sample a density and print its moments')
    moments.add_argument('--spec', required=True, help='DensitySpec JSON')
    moments.add_argument('--n', type=int, default=None, help='override the sample count')
    moments.add_argument('--seed', type=int, default=None, help='override the seed')
    moments.add_argument('--json', default=None, help='write the report here')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit:
        return EXIT_CONFIG if exit.code else 0

    logger.remove()
    logger.add(sys.stderr, level=args.log_level.upper())

    if args.command == 'simulate':
        return cmd_simulate(args.config, args.out, args.dump_every)
    if args.command == 'certify':
        return cmd_certify(args.deployment, args.field, args.region, args.grid, args.json)
    if args.command == 'sweep':
        return cmd_sweep(args.config, args.param, args.values, args.out)
    return cmd_moments(args.spec, args.n, args.seed, args.json)
