import logging
from configparser import ConfigParser
from pathlib import Path
from typing import Optional

import numpy as np

from backend.diagnostics import warn_underresolved
from backend.exceptions import GridTooSmall, NonRealInput
from backend.series import pseries
from models.circlesamples import CircleSamples, VectorFieldS1
from models.mapstate import MapState
from models.powerseries import PowerSeries

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

_grid_cfg = _cfg['Grid']
OVERSAMPLE_FACTOR = _grid_cfg.getint('OversampleFactor')
MINIMUM_FACTOR = _grid_cfg.getint('MinimumFactor')
REALITY_TOLERANCE = _grid_cfg.getfloat('RealityTolerance')
TAIL_TOLERANCE = _grid_cfg.getfloat('TailTolerance')


def grid_size(N: int, factor: int = OVERSAMPLE_FACTOR) -> int:
    """
    Return the smallest power of two which is at least factor * (N + 1).
    """
    M = 1
    while M < factor * (N + 1):
        M *= 2
    return M


def theta_grid(M: int) -> np.ndarray:
    return 2 * np.pi * np.arange(M) / M


def synthesize(series: PowerSeries, M: int) -> CircleSamples:
    """
    Evaluate a series at the M grid points e^{i theta_j} by an inverse FFT.

    :param series: The series to evaluate.
    :param M: The grid size, larger than the degree of the series.
    :return: The boundary values.
    """
    if M <= series.N:
        raise GridTooSmall(f'Grid of size {M} cannot hold degree {series.N}')
    padded = np.zeros(M, dtype=complex)
    padded[:series.N + 1] = series.coeffs
    return CircleSamples(M * np.fft.ifft(padded))


def sample_map(f: MapState, M: int, order: int = 0) -> CircleSamples:
    """
    Sample a derivative of the map on the unit circle.

    :param f: The map.
    :param M: The grid size, at least MINIMUM_FACTOR * (N + 1).
    :param order: The order of the derivative, between 0 and 3.
    :return: The samples of the order-th derivative of f.
    """
    if M < MINIMUM_FACTOR * (f.N + 1):
        raise GridTooSmall(f'Grid of size {M} is below {MINIMUM_FACTOR}(N+1) '
                           f'for N = {f.N}')
    if not 0 <= order <= 3:
        raise ValueError(f'Derivative order {order} is not in 0..3')
    s = f.series
    for _ in range(order):
        s = pseries.derivative(s)
    return synthesize(s, M)


def fourier(samples: CircleSamples) -> np.ndarray:
    """
    Return the discrete Fourier coefficients g_k = (1/M) sum_j g_j e^{-ik theta_j}
    for k = -M/2 .. M/2 - 1, in that order.
    """
    return np.fft.fftshift(np.fft.fft(samples.values)) / samples.M


def inverse_fourier(coeffs: np.ndarray, real: bool = False) -> CircleSamples:
    """
    Inverse of fourier.

    :param coeffs: Coefficients for k = -M/2 .. M/2 - 1.
    :param real: Whether or not the result should be declared real.
    :return: The samples.
    """
    M = len(coeffs)
    values = M * np.fft.ifft(np.fft.ifftshift(coeffs))
    return CircleSamples(values, real=real, tol=REALITY_TOLERANCE)


def spectral_derivative(samples: CircleSamples,
                        order: int = 1) -> CircleSamples:
    """
    Differentiate periodic samples with respect to theta. The Nyquist mode is
    dropped for odd orders so that real data stays real.

    :param samples: The samples to differentiate.
    :param order: The order of the derivative.
    :return: The derivative samples, real if the input was real.
    """
    M = samples.M
    k = np.fft.fftfreq(M, 1 / M)
    g = np.fft.fft(samples.values) * (1j * k) ** order
    if order % 2:
        g[M // 2] = 0
    values = np.fft.ifft(g)
    if samples.real:
        values = values.real
    return CircleSamples(values, real=samples.real)


def tail_ratio(coeffs: np.ndarray, N: int) -> float:
    """
    Relative spectral energy of the modes with |k| > N in shifted coefficients.
    """
    M = len(coeffs)
    k = np.arange(-M // 2, M // 2)
    energy = np.abs(coeffs) ** 2
    total = energy.sum()
    if total == 0:
        return 0.0
    return float(energy[np.abs(k) > N].sum() / total)


def herglotz_extend(rho: CircleSamples, N: int) -> PowerSeries:
    """
    Extend real boundary data into the disk with the Schwarz kernel:
    p(zeta) = (1/2pi) int rho(theta) (e^{i theta} + zeta)/(e^{i theta} - zeta).
    The real part of p on the circle is rho, and p(0) is the mean of rho.
    Positive data which loses Re p > 0 on the grid after truncation is
    reported as under-resolved.

    :param rho: Real samples of the boundary data.
    :param N: The truncation degree of the result.
    :return: The series of p.
    """
    if not rho.real:
        try:
            rho = CircleSamples(rho.values, real=True, tol=REALITY_TOLERANCE)
        except NonRealInput:
            logging.exception('FAIL Herglotz extension of complex data')
            raise
    if rho.M <= 2 * N:
        raise GridTooSmall(f'Grid of size {rho.M} cannot resolve mode {N}')

    g = fourier(rho)
    ratio = tail_ratio(g, N)
    if ratio > TAIL_TOLERANCE:
        warn_underresolved(f'Boundary data has relative tail energy '
                           f'{ratio:.2e} beyond mode {N}')

    # Negative modes are the conjugates of the positive ones and get discarded
    zero = rho.M // 2
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0] = g[zero].real
    coeffs[1:] = 2 * g[zero + 1:zero + N + 1]
    p = PowerSeries(coeffs)

    if np.all(rho.values.real > 0):
        smallest = min_real_part(p, rho.M)
        if smallest <= 0:
            warn_underresolved(f'Extension of positive data to degree {N} '
                               f'has min Re p = {smallest:.3e}')
    return p


def lk_driver(nu: VectorFieldS1, p0: float, N: int) -> PowerSeries:
    """
    Build the Loewner-Kufarev driver
    p(zeta) = p0 + (zeta / 2 pi i) int nu(w) / (w (w - zeta)) dw,
    whose coefficients are p0 and nu_k for k >= 1.

    :param nu: The vector field driving the evolution.
    :param p0: The value p(0) > 0.
    :param N: The truncation degree of the result.
    :return: The series of p.
    """
    if nu.M <= 2 * N:
        raise GridTooSmall(f'Grid of size {nu.M} cannot resolve mode {N}')
    zero = nu.M // 2
    p = np.zeros(N + 1, dtype=complex)
    p[0] = p0
    p[1:] = nu.fourier[zero + 1:zero + N + 1]
    return PowerSeries(p)


def semiflow_generator(nu: VectorFieldS1, p0: float, N: int) -> PowerSeries:
    """
    Return the generator v(zeta) = -zeta p(zeta) of the semi-flow of the disk
    driven by nu. Re(v / zeta) <= 0 whenever p is a Herglotz function.
    """
    p = lk_driver(nu, p0, N).coeffs
    v = np.zeros(N + 1, dtype=complex)
    v[1:] = -p[:-1]
    return PowerSeries(v)


def quad_trapezoid(g: CircleSamples) -> complex:
    """
    Periodic trapezoid rule for the integral of g over [0, 2 pi].
    """
    return complex(2 * np.pi * np.sum(g.values) / g.M)


def min_real_part(series: PowerSeries, M: Optional[int] = None) -> float:
    """
    Return the minimum of Re p over the circle grid.
    """
    M = M if M is not None else grid_size(series.N)
    return float(np.min(synthesize(series, M).values.real))
