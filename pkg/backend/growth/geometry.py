import contextlib
import threading
from configparser import ConfigParser
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from backend.exceptions import CuspProximity, OriginSingularity
from backend.series import pseries
from backend.spectral import circlegrid
from models.circlesamples import CircleSamples
from models.mapstate import MapState

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

CUSP_THRESHOLD = _cfg['Geometry'].getfloat('CuspThreshold')

# Threshold installed by cusp_guard on the current thread
_local = threading.local()


def _grid(f: MapState, M: Optional[int]) -> int:
    return M if M is not None else circlegrid.grid_size(f.N)


@contextlib.contextmanager
def cusp_guard(threshold: Optional[float]) -> Iterator[float]:
    """
    Make checked_fprime use another cusp threshold on this thread inside the
    block. None keeps CUSP_THRESHOLD.
    """
    previous = getattr(_local, 'threshold', None)
    _local.threshold = threshold
    try:
        yield active_threshold()
    finally:
        _local.threshold = previous


def active_threshold() -> float:
    threshold = getattr(_local, 'threshold', None)
    return CUSP_THRESHOLD if threshold is None else threshold


def checked_fprime(f: MapState, M: int) -> np.ndarray:
    """
    Sample f' on the circle, refusing maps which are too close to a cusp.
    """
    fp = circlegrid.sample_map(f, M, 1).values
    smallest = np.min(np.abs(fp))
    threshold = active_threshold()
    if smallest <= threshold:
        raise CuspProximity(f"min |f'| = {smallest:.3e} at t = {f.t} is below "
                            f'{threshold}')
    return fp


def curvature(f: MapState, M: Optional[int] = None) -> CircleSamples:
    """
    Curvature of the boundary curve f(e^{i theta}),
    kappa = Re(1 + zeta f''/f') / |f'|.

    :param f: The map.
    :param M: The grid size.
    :return: Real samples of the curvature.
    """
    M = _grid(f, M)
    fp = checked_fprime(f, M)
    fpp = circlegrid.sample_map(f, M, 2).values
    zeta = np.exp(1j * circlegrid.theta_grid(M))
    kappa = np.real(1 + zeta * fpp / fp) / np.abs(fp)
    return CircleSamples(kappa, real=True)


def area(f: MapState) -> float:
    """
    Area of the image of the disk, pi sum k |c_k|^2.
    """
    k = np.arange(f.N + 1)
    return float(np.pi * np.sum(k * np.abs(f.coeffs) ** 2))


def boundary_area(f: MapState, M: Optional[int] = None) -> float:
    """
    Area by the boundary integral (1/2) int Im(conj(z) dz), used as an oracle
    for area.
    """
    M = _grid(f, M)
    z = circlegrid.sample_map(f, M, 0).values
    fp = circlegrid.sample_map(f, M, 1).values
    zeta = np.exp(1j * circlegrid.theta_grid(M))
    integrand = CircleSamples(0.5 * np.real(np.conj(z) * fp * zeta))
    return circlegrid.quad_trapezoid(integrand).real


def richardson_moments(f: MapState, kmax: int,
                       M: Optional[int] = None) -> List[complex]:
    """
    Richardson's moments M_k = (1/pi) int_Omega z^k, k = 1..kmax, as the contour
    integral (1/2 pi i) int f^k conj(f) f' dw over the unit circle.

    :param f: The map.
    :param kmax: The largest moment index.
    :param M: The grid size. It is raised if needed so that the integrand
    (a trigonometric polynomial of degree (kmax + 2) N) is integrated exactly.
    :return: The list M_1, ..., M_kmax.
    """
    if kmax < 1:
        raise ValueError('kmax must be at least 1')
    M = max(_grid(f, M), circlegrid.grid_size(f.N, kmax + 2))
    z = circlegrid.sample_map(f, M, 0).values
    fp = circlegrid.sample_map(f, M, 1).values
    zeta = np.exp(1j * circlegrid.theta_grid(M))
    base = np.conj(z) * fp * zeta
    moments = []
    for k in range(1, kmax + 1):
        moments.append(complex(np.mean(z ** k * base)))
    return moments


def complex_velocity(f: MapState, zeta: Union[complex, np.ndarray]) \
        -> Union[complex, np.ndarray]:
    """
    The complex velocity W'(z) = -1 / (zeta f'(zeta)) at z = f(zeta).

    :param f: The map.
    :param zeta: A point (or array of points) with 0 < |zeta| <= 1.
    :return: The complex velocity at the image point(s).
    """
    if np.any(np.asarray(zeta) == 0):
        raise OriginSingularity('The complex velocity is singular at the '
                                'source')
    fp = pseries.evaluate(pseries.derivative(f.series), zeta)
    return -1 / (zeta * fp)


def cusp_indicator(f: MapState, M: Optional[int] = None) -> float:
    """
    Return min |f'| over the circle grid. Zero means a cusp on the boundary.
    """
    M = _grid(f, M)
    return float(np.min(np.abs(circlegrid.sample_map(f, M, 1).values)))


def boundary_schwarzian(f: MapState, M: Optional[int] = None) -> CircleSamples:
    """
    Pointwise Schwarzian f'''/f' - (3/2)(f''/f')^2 on the circle, from sampled
    derivatives (more accurate than synthesizing the truncated S_f series).
    """
    M = _grid(f, M)
    fp = checked_fprime(f, M)
    fpp = circlegrid.sample_map(f, M, 2).values
    fppp = circlegrid.sample_map(f, M, 3).values
    return CircleSamples(fppp / fp - 1.5 * (fpp / fp) ** 2)


def boundary_points(f: MapState, M: Optional[int] = None) \
        -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Return theta, x and y of the sampled boundary curve.
    """
    M = _grid(f, M)
    z = circlegrid.sample_map(f, M, 0).values
    return circlegrid.theta_grid(M), z.real, z.imag


def _orientation(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.sign(np.imag(np.conj(b - a) * (c - a)))


def self_intersects(f: MapState, M: Optional[int] = None) -> bool:
    """
    Heuristic check of whether the sampled boundary polygon crosses itself.
    A negative answer does not certify univalence.
    """
    M = _grid(f, M)
    z = circlegrid.sample_map(f, M, 0).values
    a, b = z, np.roll(z, -1)
    p, q = a[:, None], b[:, None]
    r, s = a[None, :], b[None, :]
    crossing = (_orientation(p, q, r) * _orientation(p, q, s) < 0) & \
               (_orientation(r, s, p) * _orientation(r, s, q) < 0)

    # Adjacent segments share an endpoint and never count
    i, j = np.indices((M, M))
    adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) == M - 1)
    return bool(np.any(crossing & ~adjacent))


def winding_numbers(f: MapState, points: np.ndarray,
                    M: Optional[int] = None) -> np.ndarray:
    """
    Winding numbers of the sampled curve f(S^1) around each point.

    :param f: The map whose boundary is the curve.
    :param points: Complex points, not on the curve.
    :param M: The grid size.
    :return: Integer winding numbers.
    """
    M = _grid(f, M)
    z = circlegrid.sample_map(f, M, 0).values
    w = np.asarray(points, dtype=complex)[:, None]
    increments = np.angle((np.roll(z, -1)[None, :] - w) / (z[None, :] - w))
    return np.rint(increments.sum(axis=1) / (2 * np.pi)).astype(int)


def is_subordinate(f_s: MapState, f_t: MapState,
                   M: Optional[int] = None) -> bool:
    """
    Sampled strong subordination check: every boundary sample of f_s lies
    strictly inside the curve f_t(S^1).
    """
    M = max(_grid(f_s, M), _grid(f_t, M))
    inner = circlegrid.sample_map(f_s, M, 0).values
    return bool(np.all(winding_numbers(f_t, inner, M) == 1))
