import csv
import functools
import json
import logging
import math
from configparser import ConfigParser
from pathlib import Path
from typing import Any, Callable, List

import numpy as np

from backend import constants
from backend.exceptions import CuspProximity
from backend.growth import geometry
from backend.spectral import circlegrid
from models.scenario import Trajectory
from models.summary import RunSummary

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent / 'config/loggrowth.ini',
           _here.parent / 'config/loggrowth.local.ini'])

WRITE_FILES = _cfg['Output'].getboolean('WriteFiles')


def file_write(func: Callable) -> Callable:
    """
    Wrapper which ensures that the config allows writing result files before
    writing them, and logs every file written.

    The wrapped function returns the path(s) it wrote.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if not WRITE_FILES:
            return None
        written = func(*args, **kwargs)
        for path in written if isinstance(written, list) else [written]:
            logging.info(f'OK wrote {path}')
        return written
    return wrapper


def _fmt(x: float) -> str:
    return constants.FLOAT_FORMAT % x


def _grid(traj: Trajectory) -> int:
    s = traj.scenario
    return s.M if s.M is not None else circlegrid.grid_size(s.N)


def timeseries_rows(traj: Trajectory) -> List[List[float]]:
    """
    One row per recorded state, in the order of TIMESERIES_COLUMNS.
    """
    M = _grid(traj)
    rows = []
    for state, report in traj.records:
        m1, m2 = geometry.richardson_moments(state, 2, M)
        rows.append([
            state.t, state.alpha, report.E, report.S, report.dE_dt,
            report.dSE_dt_theorem, report.dSE_dt_fd, report.dSE_dt_omega,
            report.curv_sq_integral, geometry.area(state),
            m1.real, m1.imag, m2.real, m2.imag,
            geometry.cusp_indicator(state, M),
            report.residuals.get('pg_residual', math.nan)
        ])
    return rows


@file_write
def write_timeseries(traj: Trajectory, directory: Path) -> Path:
    """
    Write timeseries.csv.

    :param traj: The trajectory.
    :param directory: The output directory, created if needed.
    :return: The path written.
    """
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / 'timeseries.csv'
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(constants.TIMESERIES_COLUMNS)
        for row in timeseries_rows(traj):
            writer.writerow([_fmt(x) for x in row])
    return path


def snapshot_indices(traj: Trajectory, snapshot_stride: int) -> List[int]:
    """
    Step indices of the boundary snapshots: every snapshot_stride steps and
    the last accepted state.
    """
    last = len(traj.states) - 1
    indices = list(range(0, last + 1, snapshot_stride))
    if last >= 0 and indices[-1] != last:
        indices.append(last)
    return indices


@file_write
def write_boundaries(traj: Trajectory, directory: Path,
                     snapshot_stride: int) -> List[Path]:
    """
    Write boundary_XXXX.csv snapshots, XXXX being the step index.

    :param traj: The trajectory.
    :param directory: The output directory, created if needed.
    :param snapshot_stride: Steps between snapshots.
    :return: The paths written.
    """
    directory.mkdir(parents=True, exist_ok=True)
    M = _grid(traj)
    paths = []
    for n in snapshot_indices(traj, snapshot_stride):
        state = traj.states[n]
        theta, x, y = geometry.boundary_points(state, M)
        try:
            with geometry.cusp_guard(traj.scenario.cusp_threshold):
                kappa = geometry.curvature(state, M).values.real
        except CuspProximity:
            kappa = np.full(M, math.nan)
        path = directory / f'boundary_{n:04d}.csv'
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(constants.BOUNDARY_COLUMNS)
            for row in zip(theta, x, y, kappa):
                writer.writerow([_fmt(v) for v in row])
        paths.append(path)
    return paths


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def summary_json(summary: RunSummary) -> str:
    return json.dumps(_json_safe(summary.get_dict()), sort_keys=True,
                      indent=2, allow_nan=False) + '\n'


@file_write
def write_summary(summary: RunSummary, directory: Path) -> Path:
    """
    Write summary.json, with non-finite numbers as null.
    """
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / 'summary.json'
    with open(path, 'w', encoding='utf-8') as f:
        f.write(summary_json(summary))
    return path


def write_all(traj: Trajectory, summary: RunSummary, directory: Path,
              formats: List[str], snapshot_stride: int) -> List[Path]:
    """
    Write every enabled result file of a run.
    """
    written = []
    if 'timeseries' in formats:
        written.append(write_timeseries(traj, directory))
    if 'boundary' in formats:
        written.extend(write_boundaries(traj, directory, snapshot_stride) or [])
    if 'summary' in formats:
        written.append(write_summary(summary, directory))
    return [path for path in written if path is not None]
