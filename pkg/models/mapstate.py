from typing import Iterable, List, Optional, Sequence

import numpy as np

from backend.exceptions import InvalidMapState
from models.powerseries import PowerSeries


class MapState:
    """
    A conformal map f(zeta, t) = alpha zeta + c_2 zeta^2 + ... of the unit disk
    onto the domain at time t, normalized so that f(0) = 0 and f'(0) > 0.

    Gauged states have c_1 real and positive. Intermediate Runge-Kutta stages
    are built with gauge=False and may carry a complex c_1.

    :ivar series: The coefficients of f, with c_0 = 0.
    :ivar t: The time of the state.
    """
    series: PowerSeries
    t: float

    def __init__(self, series: PowerSeries, t: float = 0.0,
                 gauge: bool = True) -> None:
        """
        Construct a MapState, rotating the coefficients when gauge is set.

        :param series: The series of f.
        :param t: The time of the state.
        :param gauge: Whether or not to rotate the phase so that c_1 > 0.
        """
        c = np.array(series.coeffs, dtype=complex)
        if c.size < 2:
            raise InvalidMapState('A map needs at least a linear coefficient')
        if abs(c[0]) > 1e-12:
            raise InvalidMapState(f'f(0) must vanish, got c_0 = {c[0]}')
        if not abs(c[1]) > 0:
            raise InvalidMapState("f'(0) vanishes")
        c[0] = 0

        if gauge:
            # Precompose with a rotation, the image domain is unchanged
            radius = abs(c[1])
            beta = -np.angle(c[1])
            if beta != 0:
                c = c * np.exp(1j * beta * np.arange(c.size))
            c[1] = radius
        self.series = PowerSeries(c)
        self.t = float(t)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex], t: float = 0.0,
                    N: Optional[int] = None) -> 'MapState':
        """
        Construct a gauged MapState from its coefficients c_0, c_1, ...,
        optionally padded to degree N.

        :param coeffs: The coefficients, lowest degree first.
        :param t: The time of the state.
        :param N: The truncation degree, or None to keep the given length.
        :return: The MapState.
        """
        series = PowerSeries(coeffs)
        if N is not None:
            series = series.resized(N)
        return cls(series, t)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]], t: float = 0.0,
                   N: Optional[int] = None) -> 'MapState':
        """
        Construct a MapState from [re, im] coefficient pairs, the format used in
        run configurations.
        """
        coeffs = [complex(re, im) for re, im in pairs]
        return cls.from_coeffs(coeffs, t, N)

    @property
    def N(self) -> int:
        return self.series.N

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    @property
    def alpha(self) -> float:
        """
        The conformal radius f'(0).
        """
        return float(abs(self.coeffs[1]))

    @property
    def coordinates(self) -> np.ndarray:
        """
        The coordinates c_2 / alpha, ..., c_N / alpha of the normalized map.
        """
        return self.coeffs[2:] / self.coeffs[1]

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.coeffs[1] - 1) <= tol

    def normalized(self) -> 'MapState':
        """
        Return f / alpha, the representative with f'(0) = 1.
        """
        return MapState(PowerSeries(self.coeffs / self.coeffs[1]), self.t)

    def scaled(self, factor: float) -> 'MapState':
        return MapState(self.series.scaled(factor), self.t)

    def rotated(self, beta: float) -> 'MapState':
        """
        Return the map e^{-i beta} f(e^{i beta} zeta), which is still normalized
        and has c_k multiplied by e^{i (k - 1) beta}.

        :param beta: The rotation angle.
        :return: The rotated map.
        """
        k = np.arange(self.N + 1)
        return MapState(PowerSeries(self.coeffs * np.exp(1j * (k - 1) * beta)),
                        self.t)

    def retimed(self, t: float) -> 'MapState':
        state = MapState.__new__(MapState)
        state.series, state.t = self.series, float(t)
        return state

    def with_degree(self, N: int) -> 'MapState':
        return MapState(self.series.resized(N), self.t)

    def as_pairs(self) -> List[List[float]]:
        return [[c.real, c.imag] for c in self.coeffs]

    def __repr__(self) -> str:
        return f'MapState(t={self.t}, alpha={self.alpha}, N={self.N})'
