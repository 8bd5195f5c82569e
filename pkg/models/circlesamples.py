from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

from backend.exceptions import GridMismatch, NonRealInput


class CircleSamples:
    """
    Samples of a function on the unit circle at theta_j = 2 pi j / M.

    :ivar values: The M samples, a float array when the data is real.
    :ivar real: Whether or not the data is real.
    """
    values: np.ndarray
    real: bool

    def __init__(self, values: Iterable[complex], real: bool = False,
                 tol: float = 1e-12) -> None:
        """
        Construct CircleSamples, checking the reality of data declared real.

        :param values: The samples.
        :param real: Whether or not the data is declared real.
        :param tol: The largest imaginary part tolerated on real data.
        """
        arr = np.asarray(values)
        if real:
            if np.iscomplexobj(arr):
                worst = np.max(np.abs(arr.imag), initial=0)
                if worst >= tol:
                    raise NonRealInput(f'Samples declared real have imaginary '
                                       f'parts up to {worst:.3e}')
                arr = arr.real
            arr = np.array(arr, dtype=float)
        else:
            arr = np.array(arr, dtype=complex)
        arr.setflags(write=False)
        self.values, self.real = arr, real

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.M) / self.M

    def check_grid(self, other: 'CircleSamples') -> None:
        if other.M != self.M:
            raise GridMismatch(f'Grids of size {self.M} and {other.M} differ')


class VectorFieldS1:
    """
    A real vector field nu(theta) d/dtheta on the circle, stored as samples and
    as Fourier coefficients nu_k, k = -M/2 .. M/2 - 1, with nu_{-k} the
    conjugate of nu_k.

    :ivar samples: The real samples of nu.
    :ivar fourier: The symmetrized Fourier coefficients, in shifted order.
    """
    samples: CircleSamples
    fourier: np.ndarray

    def __init__(self, samples: Union[CircleSamples, Sequence[float]]) -> None:
        if not isinstance(samples, CircleSamples) or not samples.real:
            samples = CircleSamples(getattr(samples, 'values', samples),
                                    real=True)
        self.samples = samples

        # Symmetrize so that the coefficient of -k is exactly conj(nu_k)
        M = samples.M
        g = np.fft.fft(samples.values) / M
        g = 0.5 * (g + np.conj(g[(-np.arange(M)) % M]))
        fourier = np.fft.fftshift(g)
        fourier.setflags(write=False)
        self.fourier = fourier

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray],
                      M: int) -> 'VectorFieldS1':
        theta = 2 * np.pi * np.arange(M) / M
        return cls(CircleSamples(func(theta), real=True))

    @classmethod
    def from_modes(cls, constant: float,
                   modes: Iterable[Tuple[int, float, float]],
                   M: int) -> 'VectorFieldS1':
        """
        Construct nu = constant + sum a_k cos(k theta) + b_k sin(k theta).

        :param constant: The mean of nu.
        :param modes: Triples (k, a_k, b_k).
        :param M: The grid size.
        :return: The vector field.
        """
        theta = 2 * np.pi * np.arange(M) / M
        values = np.full(M, float(constant))
        for k, a, b in modes:
            values += a * np.cos(k * theta) + b * np.sin(k * theta)
        return cls(CircleSamples(values, real=True))

    @property
    def M(self) -> int:
        return self.samples.M

    @property
    def values(self) -> np.ndarray:
        return self.samples.values

    def mode(self, k: int) -> complex:
        """
        Return the Fourier coefficient nu_k, for -M/2 <= k < M/2.
        """
        return complex(self.fourier[k + self.M // 2])

    def _combine(self, other: 'VectorFieldS1', sign: float) -> 'VectorFieldS1':
        self.samples.check_grid(other.samples)
        return VectorFieldS1(self.values + sign * other.values)

    def __add__(self, other: 'VectorFieldS1') -> 'VectorFieldS1':
        return self._combine(other, 1.0)

    def __sub__(self, other: 'VectorFieldS1') -> 'VectorFieldS1':
        return self._combine(other, -1.0)

    def scaled(self, factor: float) -> 'VectorFieldS1':
        return VectorFieldS1(factor * self.values)
