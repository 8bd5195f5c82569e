from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from backend import constants
from backend.exceptions import ConfigError, OutOfRange
from models.actionreport import ActionReport
from models.circlesamples import VectorFieldS1
from models.mapstate import MapState

FieldFunction = Callable[[np.ndarray, float], np.ndarray]
Mode = Union[Tuple[int, float, float], Tuple[int, float, float, float, float]]


class Driver:
    """
    What drives the evolution: the Laplacian growth itself, or a custom
    vector field nu(theta, t) with driver value p0(t) of a Loewner-Kufarev
    evolution.

    :ivar kind: Either 'laplacian-growth' or 'custom'.
    :ivar nu: The custom vector field as a function of (theta, t).
    :ivar p0: The custom driver value, constant or a function of t.
    """
    kind: str
    nu: Optional[FieldFunction]
    p0: Union[None, float, Callable[[float], float]]

    def __init__(self, kind: str = constants.LAPLACIAN_GROWTH,
                 nu: Optional[FieldFunction] = None,
                 p0: Union[None, float, Callable[[float], float]] = None) \
            -> None:
        if kind not in (constants.LAPLACIAN_GROWTH, constants.CUSTOM):
            raise ConfigError(f'Unknown driver kind {kind!r}')
        if kind == constants.CUSTOM and (nu is None or p0 is None):
            raise ConfigError('A custom driver needs both nu and p0')
        self.kind, self.nu, self.p0 = kind, nu, p0

    @classmethod
    def from_modes(cls, p0: float, constant: float, modes: List[Mode],
                   p0_rate: float = 0.0) -> 'Driver':
        """
        Construct a custom driver with the field
        nu = constant + sum a_k(t) cos(k theta) + b_k(t) sin(k theta).

        :param p0: The driver value at t = 0.
        :param constant: The constant part of nu.
        :param modes: Tuples (k, a_k, b_k), or (k, a_k, b_k, da_k, db_k) for
        amplitudes which change linearly, a_k(t) = a_k + da_k t.
        :param p0_rate: The driver value changes as p0(t) = p0 + p0_rate t.
        :return: The custom driver.
        """
        modes = [tuple(mode) + (0.0, 0.0) if len(mode) == 3 else tuple(mode)
                 for mode in modes]

        def nu(theta: np.ndarray, t: float) -> np.ndarray:
            values = np.full(theta.shape, float(constant))
            for k, a, b, da, db in modes:
                values += (a + da * t) * np.cos(k * theta) + \
                    (b + db * t) * np.sin(k * theta)
            return values

        if not p0_rate:
            return cls(constants.CUSTOM, nu, p0)
        return cls(constants.CUSTOM, nu, lambda t: p0 + p0_rate * t)

    @property
    def is_laplacian_growth(self) -> bool:
        return self.kind == constants.LAPLACIAN_GROWTH

    def vector_field(self, t: float, M: int) -> VectorFieldS1:
        theta = 2 * np.pi * np.arange(M) / M
        return VectorFieldS1(self.nu(theta, t))

    def p0_at(self, t: float) -> float:
        return float(self.p0(t) if callable(self.p0) else self.p0)


class Scenario:
    """
    Everything needed to run one evolution.

    :ivar initial: The initial map, padded to degree N.
    :ivar N: The truncation degree.
    :ivar M: The circle grid size, None for the default of the degree.
    :ivar dt: The time step.
    :ivar t_end: The final time.
    :ivar driver: The driver of the evolution.
    :ivar cusp_threshold: Stop when min |f'| drops to this, None for default.
    :ivar max_steps: The maximum number of steps, None for default.
    :ivar error_estimate: Whether or not to estimate the local error by step
    halving at every recorded state.
    """
    initial: MapState
    N: int
    M: Optional[int]
    dt: float
    t_end: float
    driver: Driver
    cusp_threshold: Optional[float]
    max_steps: Optional[int]
    error_estimate: bool

    def __init__(self, initial: MapState, dt: float, t_end: float,
                 N: Optional[int] = None, M: Optional[int] = None,
                 driver: Optional[Driver] = None,
                 cusp_threshold: Optional[float] = None,
                 max_steps: Optional[int] = None,
                 error_estimate: bool = False) -> None:
        # Injection only, suction is ill-posed
        if not dt > 0:
            raise ConfigError(f'scenario.dt must be positive, got {dt}')
        if not t_end > initial.t:
            raise ConfigError(f'scenario.t_end = {t_end} must exceed the '
                              f'initial time {initial.t}')
        N = initial.N if N is None else N
        if N < 2:
            raise ConfigError(f'scenario.N must be at least 2, got {N}')
        if M is not None and M < 4 * (N + 1):
            raise ConfigError(f'scenario.M = {M} is below 4(N+1) = '
                              f'{4 * (N + 1)}')
        if cusp_threshold is not None and not cusp_threshold > 0:
            raise ConfigError('scenario.cusp_threshold must be positive')
        if max_steps is not None and max_steps < 1:
            raise ConfigError('scenario.max_steps must be at least 1')

        self.initial = initial.with_degree(N)
        self.N, self.M, self.dt, self.t_end = N, M, float(dt), float(t_end)
        self.driver = driver if driver is not None else Driver()
        if not self.driver.is_laplacian_growth and \
                not min(self.driver.p0_at(initial.t),
                        self.driver.p0_at(self.t_end)) > 0:
            raise ConfigError('scenario.driver.p0 must stay positive until '
                              't_end')
        self.cusp_threshold, self.max_steps = cusp_threshold, max_steps
        self.error_estimate = error_estimate


class Trajectory:
    """
    The result of a run.

    :ivar scenario: The scenario which was run.
    :ivar states: Every accepted state, the initial one included.
    :ivar records: (state, report) pairs at the output stride.
    :ivar status: 'Completed', 'CuspStop' or 'Error'.
    :ivar message: Why the run stopped early, if it did.
    :ivar flags: Diagnostics raised during the run.
    """
    scenario: Scenario
    states: List[MapState]
    records: List[Tuple[MapState, ActionReport]]
    status: str
    message: Optional[str]
    flags: List[str]

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.states, self.records, self.flags = [], [], []
        self.status, self.message = constants.COMPLETED, None

    @property
    def times(self) -> np.ndarray:
        return np.array([state.t for state in self.states])

    @property
    def t_final(self) -> float:
        return self.states[-1].t

    def flag(self, message: str) -> None:
        if message not in self.flags:
            self.flags.append(message)

    def state_at(self, t: float) -> MapState:
        """
        Return the accepted state at time t.

        :param t: A time on the step lattice of the run.
        :return: The state.
        """
        dt = self.scenario.dt
        index = int(round((t - self.states[0].t) / dt))
        if 0 <= index < len(self.states) and \
                abs(self.states[index].t - t) <= 1e-6 * dt:
            return self.states[index]

        # The last step may be shorter than dt
        if abs(self.states[-1].t - t) <= 1e-6 * dt:
            return self.states[-1]
        raise OutOfRange(f'No state at t = {t} in [{self.states[0].t}, '
                         f'{self.t_final}]')
