from typing import Iterable, Union

import numpy as np

from backend.exceptions import DegreeMismatch, NonFiniteCoefficient


class PowerSeries:
    """
    Truncated Taylor series c_0 + c_1 z + ... + c_N z^N with complex
    coefficients. Instances are immutable, so they can be shared freely between
    threads.

    :ivar coeffs: Read-only complex array of length N + 1.
    """
    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex]) -> None:
        """
        Construct a PowerSeries from its coefficients, lowest degree first.

        :param coeffs: The coefficients c_0, ..., c_N.
        """
        arr = np.array(coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise DegreeMismatch(f'Expected a non-empty coefficient list, got '
                                 f'shape {arr.shape}')
        if not np.all(np.isfinite(arr)):
            raise NonFiniteCoefficient('Series coefficients must be finite')
        arr.setflags(write=False)
        self.coeffs = arr

    @classmethod
    def zeros(cls, N: int) -> 'PowerSeries':
        return cls(np.zeros(N + 1))

    @classmethod
    def unit(cls, N: int) -> 'PowerSeries':
        return cls.monomial(0, N)

    @classmethod
    def monomial(cls, k: int, N: int, value: complex = 1) -> 'PowerSeries':
        """
        Construct value * z^k truncated at degree N.

        :param k: The power of z, between 0 and N.
        :param N: The truncation degree.
        :param value: The coefficient of z^k.
        :return: The monomial series.
        """
        if not 0 <= k <= N:
            raise DegreeMismatch(f'Monomial z^{k} does not fit in degree {N}')
        c = np.zeros(N + 1, dtype=complex)
        c[k] = value
        return cls(c)

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    def resized(self, N: int) -> 'PowerSeries':
        """
        Pad with zeros or drop trailing coefficients to reach degree N. Only
        zero coefficients may be dropped.

        :param N: The new truncation degree.
        :return: The resized series.
        """
        if N >= self.N:
            return PowerSeries(np.pad(self.coeffs, (0, N - self.N)))
        if np.any(self.coeffs[N + 1:] != 0):
            raise DegreeMismatch(f'Truncating to degree {N} would drop '
                                 f'non-zero coefficients')
        return PowerSeries(self.coeffs[:N + 1])

    def _check_degree(self, other: 'PowerSeries') -> None:
        if other.N != self.N:
            raise DegreeMismatch(f'Degrees {self.N} and {other.N} differ')

    def __add__(self, other: 'PowerSeries') -> 'PowerSeries':
        self._check_degree(other)
        return PowerSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: 'PowerSeries') -> 'PowerSeries':
        self._check_degree(other)
        return PowerSeries(self.coeffs - other.coeffs)

    def __neg__(self) -> 'PowerSeries':
        return PowerSeries(-self.coeffs)

    def scaled(self, factor: Union[complex, float]) -> 'PowerSeries':
        return PowerSeries(factor * self.coeffs)

    def __repr__(self) -> str:
        return f'PowerSeries(N={self.N}, coeffs={self.coeffs[:4]}...)'
