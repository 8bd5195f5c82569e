import argparse
import configparser
import json
import logging
import os
import sys
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import List, Optional, Tuple

import dotenv

from backend import constants
from backend.exceptions import ConfigError, UnknownSuite
from backend.growth import dynamics
from cli import suites, writers
from cli.utils import argument, build_parser, closest, command, format_table
from models.runconfig import RunConfig
from models.summary import RunSummary

config_folder = Path(__file__).parent.parent / 'config'


def load_config(path: Path) -> RunConfig:
    """
    Read and validate a run configuration file.

    :param path: Path of the JSON document.
    :return: The validated configuration.
    """
    try:
        with open(path, encoding='utf-8') as f:
            d = json.load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read {path}: {e.strerror}')
    except json.JSONDecodeError as e:
        raise ConfigError(f'{path} is not valid JSON: {e}')
    return RunConfig(d)


def output_directory(rc: RunConfig, out: Optional[str],
                     subdirectory: Optional[str]) -> Path:
    """
    Resolve the output directory of a run: --out, then the run config, then
    LOGGROWTH_OUT, then the INI default.
    """
    ini = configparser.ConfigParser()
    ini.read([config_folder / 'loggrowth.ini',
              config_folder / 'loggrowth.local.ini'])
    base = out or rc.directory or os.getenv('LOGGROWTH_OUT') or \
        ini['Output'].get('Directory')
    directory = Path(base)
    return directory / subdirectory if subdirectory else directory


def exit_code(status: str) -> int:
    if status == constants.ERROR:
        return constants.EXIT_ERROR
    if status == constants.CUSP_STOP:
        return constants.EXIT_CUSP
    return constants.EXIT_OK


def run_one(job: Tuple[Path, Optional[str], Optional[int], bool]) -> int:
    """
    Run one configuration file and write its results.

    :param job: The config path, the --out directory, the --stride override and
    whether or not to use a subdirectory named after the config.
    :return: The exit code of this run.
    """
    path, out, stride, nested = job
    try:
        rc = load_config(path)
    except ConfigError as e:
        logging.error(f'FAIL {path}: {e}')
        return constants.EXIT_ERROR

    traj = dynamics.run(rc.scenario, stride or rc.stride)
    summary = RunSummary(traj, rc.checks)
    directory = output_directory(rc, out, path.stem if nested else None)
    try:
        writers.write_all(traj, summary, directory, rc.formats,
                          rc.snapshot_stride)
    except OSError:
        logging.exception(f'FAIL writing results of {path} to {directory}')
        return constants.EXIT_ERROR

    failed = [name for name, check in summary.get_dict()['checks'].items()
              if not check['passed']]
    if failed:
        logging.warning(f'{path}: checks over tolerance: {", ".join(failed)}')
    logging.info(f'{"OK" if traj.status == constants.COMPLETED else "FAIL"} '
                 f'{path}: {traj.status} at t = {traj.t_final}')
    return exit_code(traj.status)


def combine(codes: List[int]) -> int:
    if constants.EXIT_ERROR in codes:
        return constants.EXIT_ERROR
    if constants.EXIT_CUSP in codes:
        return constants.EXIT_CUSP
    return constants.EXIT_OK


@command('run', help='Integrate one or more scenarios and write their results',
         arguments=[
             argument('configs', nargs='+', type=Path,
                      help='Run configuration JSON files'),
             argument('--out', help='Output directory'),
             argument('--stride', type=int,
                      help='Time series stride in steps, overrides the config'),
             argument('--jobs', type=int, default=1,
                      help='Number of configs run concurrently')
         ])
def cmd_run(args: argparse.Namespace) -> int:
    if args.stride is not None and args.stride < 1:
        logging.error('FAIL --stride must be at least 1')
        return constants.EXIT_ERROR
    nested = len(args.configs) > 1
    jobs = [(path, args.out, args.stride, nested) for path in args.configs]
    if args.jobs > 1 and len(jobs) > 1:
        with ThreadPool(min(args.jobs, len(jobs))) as p:
            codes = p.map(run_one, jobs)
    else:
        codes = [run_one(job) for job in jobs]
    return combine(codes)


@command('check', help='Run an identity suite and print its residual table',
         arguments=[
             argument('suite', help=f'One of {", ".join(suites.SUITES)} or '
                                    f'all')
         ])
def cmd_check(args: argparse.Namespace) -> int:
    try:
        name = closest(args.suite, list(suites.SUITES) + ['all'])
    except UnknownSuite as e:
        logging.error(f'FAIL {e}')
        return constants.EXIT_ERROR
    names = list(suites.SUITES) if name == 'all' else [name]
    passed = True
    for key in names:
        rows = suites.run_suite(key)
        print(format_table(key, rows))
        print()
        passed = passed and all(row.passed for row in rows)
    return constants.EXIT_OK if passed else constants.EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    dotenv.load_dotenv(dotenv_path=config_folder / '.env')

    # Set up logging
    level = os.getenv('LOGGROWTH_LOG_LEVEL', 'INFO').upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format='[%(asctime)s] %(funcName)s > %(levelname)s: '
                               '%(message)s',
                        datefmt='%m/%d/%Y %I:%M:%S %p')

    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
