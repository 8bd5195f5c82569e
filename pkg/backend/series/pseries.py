from configparser import ConfigParser
from pathlib import Path
from typing import Union

import numpy as np
from numpy.polynomial import polynomial

from backend.exceptions import VanishingConstantTerm
from models.mapstate import MapState
from models.powerseries import PowerSeries

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

TRUNCATION_DEGREE = _cfg['Series'].getint('TruncationDegree')
DIVISION_TOLERANCE = _cfg['Series'].getfloat('DivisionTolerance')

SeriesLike = Union[MapState, PowerSeries]


def _as_series(f: SeriesLike) -> PowerSeries:
    return f.series if isinstance(f, MapState) else f


def derivative(s: PowerSeries) -> PowerSeries:
    """
    Differentiate term by term. The top coefficient of the result is zero.

    :param s: The series to differentiate.
    :return: The derivative, with the same truncation degree.
    """
    out = np.zeros(s.N + 1, dtype=complex)
    out[:-1] = np.arange(1, s.N + 1) * s.coeffs[1:]
    return PowerSeries(out)


def antiderivative(s: PowerSeries) -> PowerSeries:
    """
    Integrate term by term with zero constant term. The coefficient c_N of the
    input does not fit in degree N and is dropped.

    :param s: The series to integrate.
    :return: The antiderivative, with the same truncation degree.
    """
    out = np.zeros(s.N + 1, dtype=complex)
    out[1:] = s.coeffs[:-1] / np.arange(1, s.N + 1)
    return PowerSeries(out)


def multiply(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """
    Cauchy product of two series of the same degree, truncated at that degree.
    """
    a._check_degree(b)
    return PowerSeries(np.convolve(a.coeffs, b.coeffs)[:a.N + 1])


def reciprocal(a: PowerSeries) -> PowerSeries:
    """
    Compute 1 / a by the usual recurrence r_n = -(1/a_0) sum a_k r_{n-k}.

    :param a: The series to invert.
    :return: The reciprocal series.
    """
    c = a.coeffs
    if abs(c[0]) <= DIVISION_TOLERANCE:
        raise VanishingConstantTerm(f'Constant term {c[0]} is too small to '
                                    f'invert')
    r = np.zeros(a.N + 1, dtype=complex)
    r[0] = 1 / c[0]
    for n in range(1, a.N + 1):
        r[n] = -np.dot(c[1:n + 1], r[n - 1::-1]) / c[0]
    return PowerSeries(r)


def divide(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return multiply(a, reciprocal(b))


def prelog_derivative(f: SeriesLike) -> PowerSeries:
    """
    Return the series of f''/f', the derivative of log f'. It does not change
    when f is multiplied by a constant.

    :param f: The map, or any series with f'(0) != 0.
    :return: The series b(zeta) = f''(zeta) / f'(zeta).
    """
    fp = derivative(_as_series(f))
    return divide(derivative(fp), fp)


def schwarzian(f: SeriesLike) -> PowerSeries:
    """
    Return the series of the Schwarzian derivative
    S_f = f'''/f' - (3/2)(f''/f')^2 = b' - b^2 / 2 with b = f''/f'.
    Coefficients above N - 2 are set to zero.

    :param f: The map, or any series with f'(0) != 0.
    :return: The Schwarzian series.
    """
    b = prelog_derivative(f)
    s = derivative(b) - multiply(b, b).scaled(0.5)
    c = np.array(s.coeffs)
    c[max(s.N - 1, 0):] = 0
    return PowerSeries(c)


def evaluate(s: SeriesLike, zeta: Union[complex, np.ndarray]) \
        -> Union[complex, np.ndarray]:
    """
    Evaluate the truncated polynomial at zeta (Horner's scheme).

    :param s: The series.
    :param zeta: A point or an array of points, normally in the closed disk.
    :return: The value(s) of the polynomial.
    """
    return polynomial.polyval(zeta, _as_series(s).coeffs)
