import logging
import math
from collections import defaultdict
from configparser import ConfigParser
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Union

import numpy as np

from backend import constants, diagnostics
from backend.exceptions import CuspProximity, CuspReached, InvalidMapState, \
    LogGrowthError, NonHerglotzDriver, OutOfRange
from backend.growth import actions, geometry
from backend.series import pseries
from backend.spectral import circlegrid
from models.actionreport import ActionReport
from models.circlesamples import CircleSamples, VectorFieldS1
from models.mapstate import MapState
from models.powerseries import PowerSeries
from models.scenario import Scenario, Trajectory

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

_dyn_cfg = _cfg['Dynamics']
TIME_STEP = _dyn_cfg.getfloat('TimeStep')
MAX_STEPS = _dyn_cfg.getint('MaxSteps')
TAIL_GUARD = _dyn_cfg.getint('TailGuard')
TAIL_TOLERANCE = _dyn_cfg.getfloat('TailTolerance')
FD_STEP_MULTIPLE = _dyn_cfg.getint('FdStepMultiple')

OUTPUT_STRIDE = _cfg['Output'].getint('Stride')
TRUNCATION_DEGREE = _cfg['Series'].getint('TruncationDegree')

Rhs = Callable[[MapState], PowerSeries]
Functional = Union[str, Callable[[MapState], float]]

FUNCTIONALS: Dict[str, Callable[[MapState], float]] = {
    'E': actions.energy,
    'S': actions.log_action,
    'S+E': lambda f: actions.log_action(f) + actions.energy(f),
    'area': geometry.area,
    'alpha': lambda f: f.alpha,
    'log_alpha': lambda f: math.log(f.alpha)
}


def _grid(f: MapState, M: Optional[int]) -> int:
    return M if M is not None else circlegrid.grid_size(f.N)


def _zeta_fprime(f: MapState) -> PowerSeries:
    return PowerSeries(np.arange(f.N + 1) * f.coeffs)


def pg_rhs(f: MapState, M: Optional[int] = None) -> PowerSeries:
    """
    Right hand side of the Polubarinova-Galin equation extended into the disk,
    f_t = zeta f' p with p the Herglotz extension of 1/|f'|^2.

    :param f: The current map.
    :param M: The circle grid size.
    :return: The series of f_t.
    """
    M = _grid(f, M)
    fp = geometry.checked_fprime(f, M)
    rho = CircleSamples(1 / np.abs(fp) ** 2, real=True)
    p = circlegrid.herglotz_extend(rho, f.N)
    return pseries.multiply(_zeta_fprime(f), p)


def pg_residual(f: MapState, fdot: PowerSeries,
                M: Optional[int] = None) -> float:
    """
    Return max over the circle of |Re(f_t conj(zeta f')) - 1|.
    """
    M = _grid(f, M)
    zfp = circlegrid.synthesize(_zeta_fprime(f), M).values
    fd = circlegrid.synthesize(fdot, M).values
    return float(np.max(np.abs(np.real(fd * np.conj(zfp)) - 1)))


def lk_rhs(f: MapState, nu: VectorFieldS1, p0: float,
           M: Optional[int] = None) -> PowerSeries:
    """
    Right hand side of the Loewner-Kufarev equation f_t = zeta f' p with
    p = lk_driver(nu, p0).

    :param f: The current map.
    :param nu: The driving vector field.
    :param p0: The value p(0).
    :param M: The grid on which Re p > 0 is checked.
    :return: The series of f_t.
    """
    p = circlegrid.lk_driver(nu, p0, f.N)
    smallest = circlegrid.min_real_part(p, _grid(f, M))
    if smallest <= 0:
        raise NonHerglotzDriver(f'min Re p = {smallest:.3e} at t = {f.t}')
    return pseries.multiply(_zeta_fprime(f), p)


def tail_ratio(f: MapState, guard: int = TAIL_GUARD) -> float:
    """
    Relative energy of the coefficients above N - guard.
    """
    energy = np.abs(f.coeffs) ** 2
    total = energy.sum()
    return float(energy[f.N - guard + 1:].sum() / total) if total else 0.0


def _stage(coeffs: np.ndarray, t: float) -> MapState:
    return MapState(PowerSeries(coeffs), t, gauge=False)


def step(f: MapState, dt: float, rhs: Rhs, gauge: bool = True) -> MapState:
    """
    Advance one classical Runge-Kutta step on the coefficient vector, then
    re-zero c_0 and rotate the phase so that c_1 > 0.

    :param f: The current map.
    :param dt: The time step.
    :param rhs: The right hand side of the evolution.
    :param gauge: Whether or not to re-gauge the result.
    :return: The map at time t + dt.
    """
    c, t = f.coeffs, f.t
    k1 = rhs(f).coeffs
    k2 = rhs(_stage(c + 0.5 * dt * k1, t + 0.5 * dt)).coeffs
    k3 = rhs(_stage(c + 0.5 * dt * k2, t + 0.5 * dt)).coeffs
    k4 = rhs(_stage(c + dt * k3, t + dt)).coeffs
    new = c + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    new[0] = 0
    state = MapState(PowerSeries(new), t + dt, gauge=gauge)

    ratio = tail_ratio(state)
    if ratio > TAIL_TOLERANCE:
        diagnostics.warn_underresolved(f'Tail energy {ratio:.2e} beyond '
                                       f'coefficient {state.N - TAIL_GUARD} '
                                       f'at t = {state.t}')
    return state


def exact_quadratic(a0: float, b0: float, t: float,
                    N: int = TRUNCATION_DEGREE, t0: float = 0.0) -> MapState:
    """
    Exact Polubarinova-Galin solution in the family f = a zeta + b zeta^2.

    Matching Fourier modes gives the conserved moment a^2 b = C and the area
    law a^2 + 2 b^2 = a0^2 + 2 b0^2 + 2 t, so s = a^2 is the largest real root
    of s^3 - A s^2 + 2 C^2 = 0. The map is univalent while s^3 > 4 C^2.

    :param a0: The initial conformal radius.
    :param b0: The initial second coefficient, |2 b0| < a0.
    :param t: The elapsed time.
    :param N: The truncation degree of the result.
    :param t0: The time of the initial map.
    :return: The map at time t0 + t.
    """
    if not (a0 > 0 and abs(2 * b0) < a0):
        raise InvalidMapState(f'a0 = {a0}, b0 = {b0} is not univalent')
    C = a0 ** 2 * b0
    A = a0 ** 2 + 2 * b0 ** 2 + 2 * t
    roots = np.roots([1, -A, 0, 2 * C ** 2])
    real_roots = [r.real for r in roots if abs(r.imag) <= 1e-9 * abs(r)]
    admissible = [s for s in real_roots if s > 0 and s ** 3 > 4 * C ** 2]
    if not admissible:
        raise CuspReached(f'No univalent quadratic solution at t = {t}, cusp '
                          f'at a^2 = {2 * A / 3}')
    s = max(admissible)

    # Polish the root
    for _ in range(3):
        s -= (s ** 3 - A * s ** 2 + 2 * C ** 2) / (3 * s ** 2 - 2 * A * s)
    a = math.sqrt(s)
    return MapState.from_coeffs([0, a, C / s], t0 + t, N)


def exact_quadratic_rate(f: MapState) -> PowerSeries:
    """
    Analytic time derivative of a map in the quadratic family,
    a' = 1/(a(1 - 4q^2)) and b' = -2q/(a(1 - 4q^2)) with q = b/a.
    """
    a, b = f.coeffs[1].real, f.coeffs[2].real
    q = b / a
    c = np.zeros(f.N + 1, dtype=complex)
    c[1] = 1 / (a * (1 - 4 * q ** 2))
    c[2] = -2 * q / (a * (1 - 4 * q ** 2))
    return PowerSeries(c)


def _functional(functional: Functional) -> Callable[[MapState], float]:
    if callable(functional):
        return functional
    try:
        return FUNCTIONALS[functional]
    except KeyError:
        raise OutOfRange(f'Unknown functional {functional!r}, expected one '
                         f'of {sorted(FUNCTIONALS)}')


def fd_rate(traj: Trajectory, functional: Functional, t: float,
            h: Optional[float] = None, richardson: bool = False) -> float:
    """
    Central finite difference of a scalar functional along a trajectory.

    :param traj: The trajectory.
    :param functional: A name in FUNCTIONALS or a function of a MapState.
    :param t: The time of the derivative.
    :param h: The step, a multiple of dt of at least 10 dt. Defaults to
    FD_STEP_MULTIPLE dt.
    :param richardson: Whether or not to extrapolate with the 2h difference,
    (4 D(h) - D(2h)) / 3.
    :return: The rate of the functional at t.
    """
    dt = traj.scenario.dt
    h = FD_STEP_MULTIPLE * dt if h is None else h
    if h < 10 * dt * (1 - 1e-9):
        raise OutOfRange(f'h = {h} is below 10 dt = {10 * dt}')
    F = _functional(functional)

    def central(step: float) -> float:
        return (F(traj.state_at(t + step)) - F(traj.state_at(t - step))) / \
            (2 * step)

    if not richardson:
        return central(h)
    return (4 * central(h) - central(2 * h)) / 3


def fill_fd_rates(traj: Trajectory, h: Optional[float] = None) -> Trajectory:
    """
    Fill the finite difference rate of S + E into every record for which the
    Richardson stencil t +- 2h fits inside the trajectory.
    """
    h = FD_STEP_MULTIPLE * traj.scenario.dt if h is None else h
    t_start, t_stop = traj.states[0].t, traj.t_final
    for i, (state, report) in enumerate(traj.records):
        if state.t - 2 * h < t_start - 1e-12 or \
                state.t + 2 * h > t_stop + 1e-12:
            continue
        try:
            rate = fd_rate(traj, 'S+E', state.t, h, richardson=True)
        except OutOfRange:
            continue
        traj.records[i] = (state, report.with_fd(rate))
    return traj


class GrowthRun:
    """
    Controller which integrates a scenario and records reports along the way.
    Handlers registered with on() are called with the GrowthRun instance.

    :ivar scenario: The scenario to run.
    :ivar stride: Record a report every stride accepted steps.
    :ivar M: The circle grid size.
    :ivar trajectory: The trajectory built so far.
    :ivar handlers: Map of event names to their handlers.
    """
    scenario: Scenario
    stride: int
    M: int
    trajectory: Trajectory
    handlers: Dict[str, List[Callable]]

    def __init__(self, scenario: Scenario, stride: int = OUTPUT_STRIDE) -> None:
        """
        Construct a GrowthRun instance.

        :param scenario: The scenario to run.
        :param stride: The output stride, in steps.
        """
        self.scenario = scenario
        self.stride = max(1, stride)
        self.M = _grid(scenario.initial, scenario.M)
        self.trajectory = Trajectory(scenario)
        self.handlers = defaultdict(list)

    def _emit(self, event: str) -> None:
        for handler in self.handlers[event]:
            handler(self)

    def on(self,
           event: Literal['step accepted', 'report ready', 'run finished'],
           handler: Callable) -> None:
        """
        Register a handler to be called on an event.

        :param event: The name of the event.
        :param handler: The handler to be added.
        :return: None.
        """
        self.handlers[event].append(handler)

    @property
    def state(self) -> MapState:
        return self.trajectory.states[-1]

    def rhs(self, f: MapState) -> PowerSeries:
        driver = self.scenario.driver
        if driver.is_laplacian_growth:
            return pg_rhs(f, self.M)
        return lk_rhs(f, driver.vector_field(f.t, self.M), driver.p0_at(f.t),
                      self.M)

    def report(self, f: MapState) -> ActionReport:
        """
        Build the ActionReport of a state, with the residuals monitored
        along the run.
        """
        driver = self.scenario.driver
        if driver.is_laplacian_growth:
            report = actions.action_report(f, self.M)
            report.residuals['pg_residual'] = \
                pg_residual(f, pg_rhs(f, self.M), self.M)
        else:
            report = actions.action_report(f, self.M,
                                           driver.vector_field(f.t, self.M),
                                           driver.p0_at(f.t))
            report.residuals['pg_residual'] = float('nan')

        if self.scenario.error_estimate:
            full = step(f, self.scenario.dt, self.rhs)
            half = step(step(f, self.scenario.dt / 2, self.rhs),
                        self.scenario.dt / 2, self.rhs)
            report.residuals['step_error'] = \
                float(np.max(np.abs(full.coeffs - half.coeffs)))
        return report

    def _record(self, f: MapState) -> None:
        traj = self.trajectory
        if traj.records:
            previous = traj.records[-1][0]
            if not geometry.is_subordinate(previous, f, self.M):
                traj.flag(f'subordination violated between t = '
                          f'{previous.t} and t = {f.t}')
        traj.records.append((f, self.report(f)))
        self._emit('report ready')

    def run(self) -> Trajectory:
        """
        Integrate until t_end, a cusp, an error or the step limit. Never raises
        for numerical failures, which end up in the trajectory status.

        :return: The trajectory.
        """
        s, traj = self.scenario, self.trajectory
        max_steps = s.max_steps if s.max_steps is not None else MAX_STEPS
        t0 = s.initial.t
        n_steps = max(1, math.ceil((s.t_end - t0) / s.dt - 1e-9))

        logging.info(f'Running {s.driver.kind} from t = {t0} to {s.t_end} '
                     f'in {n_steps} steps (N = {s.N}, M = {self.M})')
        with diagnostics.collecting() as caught, \
                geometry.cusp_guard(s.cusp_threshold) as threshold:
            try:
                traj.states.append(s.initial)
                self._record(s.initial)
                for n in range(1, n_steps + 1):
                    if n > max_steps:
                        traj.flag(f'stopped after max_steps = {max_steps}')
                        break
                    last = n == n_steps
                    dt = s.t_end - self.state.t if last else s.dt
                    t_next = s.t_end if last else t0 + n * s.dt
                    state = step(self.state, dt, self.rhs).retimed(t_next)

                    indicator = geometry.cusp_indicator(state, self.M)
                    if indicator <= threshold:
                        raise CuspProximity(f"min |f'| = {indicator:.3e} at "
                                            f't = {t_next}')
                    traj.states.append(state)
                    self._emit('step accepted')
                    if n % self.stride == 0 or last:
                        self._record(state)
                logging.info(f'OK finished at t = {traj.t_final}')
            except CuspProximity as e:
                logging.warning(f'Cusp stop: {e}')
                traj.status, traj.message = constants.CUSP_STOP, str(e)
            except LogGrowthError as e:
                logging.exception(f'FAIL run stopped at t = {self.state.t}')
                traj.status, traj.message = constants.ERROR, str(e)
            for message in caught:
                traj.flag(f'SpectralUnderresolved: {message}')

        self._emit('run finished')
        return traj


def run(s: Scenario, stride: int = OUTPUT_STRIDE) -> Trajectory:
    """
    Integrate a scenario and fill in the finite difference rates.

    :param s: The scenario.
    :param stride: The output stride, in steps.
    :return: The trajectory.
    """
    return fill_fd_rates(GrowthRun(s, stride).run())


def drifts(traj: Trajectory, kmax: int = 2) -> Dict[str, float]:
    """
    Conserved quantity drifts over the recorded states: relative deviation of
    the fitted area slope from 2 pi, and the largest drift of each Richardson
    moment M_1 .. M_kmax (relative to |M_k(0)| unless that is below 1e-12).
    """
    states = [state for state, _ in traj.records]
    out = {}
    if not states:
        return out
    if len(states) >= 2:
        times = np.array([state.t for state in states])
        areas = np.array([geometry.area(state) for state in states])
        slope = np.polyfit(times, areas, 1)[0]
        out['area_slope'] = float(slope)
        out['area_slope_rel'] = float(abs(slope - 2 * np.pi) / (2 * np.pi))
    M = _grid(traj.scenario.initial, traj.scenario.M)
    moments = np.array([geometry.richardson_moments(state, kmax, M)
                        for state in states])
    for k in range(kmax):
        start = moments[0, k]
        drift = np.max(np.abs(moments[:, k] - start))
        scale = abs(start) if abs(start) >= 1e-12 else 1.0
        out[f'M{k + 1}'] = float(drift / scale)
    return out


def circle_law_residual(traj: Trajectory) -> Optional[float]:
    """
    For a Laplacian growth run started from a circle, the largest deviation of
    dE/dt from 2 pi / alpha^2 and of d(S + E)/dt from 4 pi / alpha^2, with
    alpha^2 = alpha_0^2 + 2 (t - t0) the exact radius. None for other runs.
    """
    s = traj.scenario
    if not s.driver.is_laplacian_growth or np.any(s.initial.coeffs[2:] != 0):
        return None
    worst = 0.0
    for state, report in traj.records:
        r2 = s.initial.alpha ** 2 + 2 * (state.t - s.initial.t)
        worst = max(worst, abs(report.dE_dt - 2 * np.pi / r2),
                    abs(report.dSE_dt_theorem - 4 * np.pi / r2))
    return worst


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO)
    cardioid = MapState.from_coeffs([0, 1, 0.3], N=TRUNCATION_DEGREE)
    trajectory = run(Scenario(cardioid, dt=1e-4, t_end=0.4), stride=500)
    for point, rep in trajectory.records:
        print(f'{point.t:.3f} {rep.dSE_dt_theorem:.10f} {rep.dSE_dt_fd:.10f}')
