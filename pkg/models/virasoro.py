from typing import List

import numpy as np

from backend.exceptions import ChargeMismatch, OutOfRange
from models.circlesamples import VectorFieldS1


class CentralElement:
    """
    An element phi d/dtheta + a C of the Virasoro algebra with central charge c.

    :ivar field: The vector field phi.
    :ivar central: The coefficient a of the center.
    :ivar charge: The central charge c of the algebra.
    """
    field: VectorFieldS1
    central: float
    charge: float

    def __init__(self, field: VectorFieldS1, central: float = 0.0,
                 charge: float = 12.0) -> None:
        if not np.isfinite(central):
            raise ValueError('The central part must be finite')
        self.field, self.central, self.charge = field, float(central), charge

    def check_charge(self, other: 'CentralElement') -> None:
        if other.charge != self.charge:
            raise ChargeMismatch(f'Charges {self.charge} and {other.charge} '
                                 f'differ')

    def __add__(self, other: 'CentralElement') -> 'CentralElement':
        self.check_charge(other)
        return CentralElement(self.field + other.field,
                              self.central + other.central, self.charge)

    def norm(self) -> float:
        return float(np.max(np.abs(self.field.values)) + abs(self.central))


class NeretinValues:
    """
    Values of the Neretin polynomials P_2, ..., P_kmax at one normalized map.

    :ivar c: The central charge.
    :ivar values: The values P_2, ..., P_kmax.
    """
    c: float
    values: List[complex]

    def __init__(self, c: float, values: List[complex]) -> None:
        self.c, self.values = c, list(values)

    @property
    def kmax(self) -> int:
        return len(self.values) + 1

    def P(self, k: int) -> complex:
        """
        Return P_k. P_k vanishes for k < 2.
        """
        if k < 2:
            return 0j
        if k > self.kmax:
            raise OutOfRange(f'P_{k} was not computed (kmax = {self.kmax})')
        return self.values[k - 2]
