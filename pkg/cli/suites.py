import logging
import math
from configparser import ConfigParser
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np

from backend.algebra import virasoro
from backend.growth import actions, dynamics
from backend.spectral import circlegrid
from cli.utils import Row
from models.circlesamples import VectorFieldS1
from models.mapstate import MapState
from models.scenario import Driver, Scenario, Trajectory
from models.virasoro import CentralElement

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent / 'config/loggrowth.ini',
           _here.parent / 'config/loggrowth.local.ini'])

_checks = _cfg['Checks']
TOL_THEOREM1 = _checks.getfloat('Theorem1')
TOL_OMEGA = _checks.getfloat('Omega')
TOL_CIRCLE_LAW = _checks.getfloat('CircleLaw')
TOL_ACTION_QUADRATURE = _checks.getfloat('ActionQuadrature')
TOL_ACTION_CLOSED_FORM = _checks.getfloat('ActionClosedForm')
TOL_COROLLARY1 = _checks.getfloat('Corollary1')
TOL_MEAN_VALUE = _checks.getfloat('MeanValue')
TOL_GENERATORS = _checks.getfloat('Generators')
TOL_BRACKETS = _checks.getfloat('Brackets')
TOL_COCYCLE = _checks.getfloat('Cocycle')
TOL_JACOBI = _checks.getfloat('Jacobi')
TOL_NERETIN = _checks.getfloat('Neretin')
TOL_RECURRENCE = _checks.getfloat('Recurrence')
TOL_PROOF_IDENTITY = _checks.getfloat('ProofIdentity')
TOL_CONSERVATION = _checks.getfloat('Conservation')
TOL_PG_RESIDUAL = _checks.getfloat('PgResidual')
TOL_EXACT_SOLUTION = _checks.getfloat('ExactSolution')
SEED = _checks.getint('Seed')

# Maps shared by the action identities
TEST_MAPS = {
    'disk': [0, 1],
    'cardioid': [0, 1, 0.3],
    'cubic': [0, 1, 0.2, 0.05]
}

# Driver of the custom Loewner-Kufarev runs
CUSTOM_P0 = 1.0
CUSTOM_MODES = [(1, 0.3, 0.0), (2, 0.0, 0.2), (3, 0.1, 0.1)]

SUITES: Dict[str, Callable[[], List[Row]]] = {}


def suite(name: str) -> Callable:
    """
    Register an identity suite. A suite returns the rows of its residual table.
    """
    def decorator(func: Callable[[], List[Row]]) -> Callable[[], List[Row]]:
        SUITES[name] = func
        return func
    return decorator


def _max(values) -> float:
    values = [v for v in values if not math.isnan(v)]
    return max(values) if values else math.nan


def _map(name: str, N: int = 32) -> MapState:
    return MapState.from_coeffs(TEST_MAPS[name], N=N)


def cardioid_trajectory() -> Trajectory:
    initial = MapState.from_coeffs([0, 1, 0.3], N=32)
    return dynamics.run(Scenario(initial, dt=1e-4, t_end=0.4), stride=100)


def circle_trajectory() -> Trajectory:
    initial = MapState.from_coeffs([0, 1], t=0.5, N=16)
    return dynamics.run(Scenario(initial, dt=1e-3, t_end=1.0, M=128),
                        stride=10)


def custom_trajectory() -> Trajectory:
    initial = MapState.from_coeffs([0, 1, 0.2, 0.05], N=32)
    driver = Driver.from_modes(CUSTOM_P0, 0.0, CUSTOM_MODES)
    return dynamics.run(Scenario(initial, dt=1e-3, t_end=0.2, driver=driver),
                        stride=10)


@suite('theorem1')
def theorem1() -> List[Row]:
    traj = cardioid_trajectory()
    residuals = [report.residuals for _, report in traj.records]
    exact = dynamics.exact_quadratic(1.0, 0.3, 0.4, N=32)
    drift = dynamics.drifts(traj)
    rows = [
        Row('cardioid: theorem vs finite difference',
            _max([r.get('theorem_vs_fd', math.nan) for r in residuals]),
            TOL_THEOREM1),
        Row('cardioid: theorem vs Omega',
            _max([r['theorem_vs_omega'] for r in residuals]), TOL_OMEGA),
        Row('cardioid: PG residual',
            _max([r['pg_residual'] for r in residuals]), TOL_PG_RESIDUAL),
        Row('cardioid: endpoint vs exact solution',
            float(np.max(np.abs(traj.states[-1].coeffs - exact.coeffs))),
            TOL_EXACT_SOLUTION),
        Row('cardioid: area slope vs 2 pi (relative)',
            drift['area_slope_rel'], TOL_CONSERVATION),
        Row('cardioid: M1 drift', drift['M1'], TOL_CONSERVATION),
        Row('cardioid: M2 drift', drift['M2'], TOL_CONSERVATION),
        Row('circle: dE/dt and d(S+E)/dt vs pi/t and 2 pi/t',
            dynamics.circle_law_residual(circle_trajectory()),
            TOL_CIRCLE_LAW),
        Row('cardioid: closed form of S',
            abs(actions.log_action(_map('cardioid')) +
                math.pi * math.log(0.64)), TOL_ACTION_CLOSED_FORM)
    ]
    for name in TEST_MAPS:
        f = _map(name)
        rows.append(Row(f'{name}: action series vs quadrature',
                        abs(actions.log_action(f) -
                            actions.log_action_quadrature(f, 1e-3)),
                        TOL_ACTION_QUADRATURE))
    return rows


@suite('proof-identity')
def proof_identity() -> List[Row]:
    return [Row(f'{name}: integration by parts',
                actions.proof_identity_residual(_map(name)),
                TOL_PROOF_IDENTITY) for name in TEST_MAPS]


@suite('corollary1')
def corollary1() -> List[Row]:
    rows = []
    for name in ('cardioid', 'cubic'):
        f = _map(name)
        M = circlegrid.grid_size(f.N)
        rho = 1 / np.abs(circlegrid.sample_map(f, M, 1).values) ** 2
        p0 = float(np.mean(rho))
        lk = dynamics.lk_rhs(f, VectorFieldS1(2 * rho), p0, M)
        pg = dynamics.pg_rhs(f, M)
        rows.append(Row(f'{name}: Loewner-Kufarev vs Polubarinova-Galin',
                        float(np.max(np.abs(lk.coeffs - pg.coeffs))),
                        TOL_COROLLARY1))
        rows.append(Row(f'{name}: dE/dt vs 2 pi p(0)',
                        abs(actions.energy_rate(f, M) -
                            actions.lk_energy_rate(p0)),
                        TOL_MEAN_VALUE))

    traj = custom_trajectory()
    t_mid = traj.states[len(traj.states) // 2].t
    rate = dynamics.fd_rate(traj, 'log_alpha', t_mid, richardson=True)
    rows.append(Row('custom driver: d log(alpha)/dt vs p(0)',
                    abs(rate - CUSTOM_P0), TOL_THEOREM1))
    return rows


@suite('virasoro')
def virasoro_suite() -> List[Row]:
    rng = np.random.default_rng(SEED)
    f = _map('cubic', N=8)
    radii = rng.uniform(0.1, 0.9, 20)
    angles = rng.uniform(0, 2 * np.pi, 20)
    points = radii * np.exp(1j * angles)

    rows = []
    for k in range(-2, 4):
        def nu(theta: np.ndarray, k: int = k) -> np.ndarray:
            return -1j * np.exp(1j * k * theta)
        worst = max(abs(virasoro.gs_variation(f, nu, z) -
                        virasoro.lk_generator_closed(f, k, z))
                    for z in points)
        rows.append(Row(f'L_{k}: variation vs closed form', worst,
                        TOL_GENERATORS))

    M = 64
    for kind in ('cos-cos', 'sin-sin', 'sin-cos'):
        worst = max(virasoro.trig_bracket_residual(kind, n, m, M)
                    for n in range(1, 6) for m in range(1, 6))
        rows.append(Row(f'{kind} commutator table', worst, TOL_BRACKETS))

    def random_field() -> VectorFieldS1:
        modes = [(k, rng.normal(), rng.normal()) for k in range(1, 4)]
        return VectorFieldS1.from_modes(rng.normal(), modes, M)

    pairs = [(random_field(), random_field()) for _ in range(10)]
    rows.append(Row('Gelfand-Fuks antisymmetry',
                    max(abs(virasoro.gelfand_fuks(phi, psi) +
                            virasoro.gelfand_fuks(psi, phi))
                        for phi, psi in pairs), TOL_COCYCLE))
    mobius = VectorFieldS1.from_modes(rng.normal(), [(1, rng.normal(),
                                                      rng.normal())], M)
    rows.append(Row('Gelfand-Fuks on the Mobius subalgebra',
                    max(abs(virasoro.gelfand_fuks(mobius, psi))
                        for _, psi in pairs), TOL_COCYCLE))
    rows.append(Row('omega(cos 2, sin 2) vs -3/2',
                    abs(virasoro.gelfand_fuks(
                        virasoro.trig_field('cos', 2, M),
                        virasoro.trig_field('sin', 2, M)) + 1.5),
                    TOL_BRACKETS))

    elements = [CentralElement(random_field(), rng.normal(), 1.0)
                for _ in range(3)]
    rows.append(Row('Virasoro Jacobi identity',
                    virasoro.jacobi_residual(*elements), TOL_JACOBI))
    rows.append(Row('basis bracket antisymmetry',
                    max(abs(virasoro.basis_bracket(m, n, 1.0)[1] +
                            virasoro.basis_bracket(n, m, 1.0)[1]) +
                        abs(virasoro.basis_bracket(m, n, 1.0)[2] +
                            virasoro.basis_bracket(n, m, 1.0)[2])
                        for m in range(-4, 5) for n in range(-4, 5)),
                    TOL_BRACKETS))

    g = MapState.from_coeffs([0, 1, 0, 0.1], N=16)
    cos2 = VectorFieldS1.from_modes(0, [(2, 1.0, 0.0)], 256)
    ones = VectorFieldS1.from_modes(1.0, [], 256)
    rows.append(Row('Omega(cos 2) vs pi S_f(0)',
                    abs(virasoro.omega_pairing(g, cos2) - math.pi * 0.6),
                    TOL_OMEGA))
    rows.append(Row('Omega(1) vs 0', abs(virasoro.omega_pairing(g, ones)),
                    TOL_OMEGA))
    return rows


@suite('neretin')
def neretin() -> List[Row]:
    rng = np.random.default_rng(SEED)
    closed, rotation = 0.0, 0.0
    samples = []
    for _ in range(50):
        c2, c3, c4 = rng.uniform(-0.1, 0.1, 3) + \
            1j * rng.uniform(-0.1, 0.1, 3)
        c = rng.uniform(-2, 2)
        f = MapState.from_coeffs([0, 1, c2, c3, c4], N=8)
        samples.append((f, c))
        P = virasoro.neretin_from_generatrix(f, c, 6)
        closed = max(closed,
                     abs(P.P(2) - c / 2 * (c3 - c2 ** 2)),
                     abs(P.P(3) - 2 * c * (c4 - 2 * c2 * c3 + c2 ** 3)))
        beta = rng.uniform(0, 2 * np.pi)
        turned = virasoro.neretin_from_generatrix(f.rotated(beta), c, 6)
        rotation = max(rotation, max(abs(turned.P(k) -
                                         np.exp(1j * k * beta) * P.P(k))
                                     for k in range(2, 7)))

    recurrence = max(virasoro.neretin_recurrence_residual(f, c, m, n)
                     for f, c in samples[:5]
                     for m in range(1, 4) for n in range(2, 7))

    family = [MapState.from_coeffs([0, 1, b], N=8)
              for b in np.linspace(0, 0.49, 50)]
    family += [MapState.from_coeffs([0, 1, 0.2 * s, 0.05 * s], N=8)
               for s in np.linspace(0, 1, 20)]
    margin = min(virasoro.bieberbach_margin(f) for f in family)

    coords = samples[0][0].coeffs[2:]
    rows = [
        Row('P_2 and P_3 vs closed forms', closed, TOL_NERETIN),
        Row('rotation homogeneity', rotation, TOL_NERETIN),
        Row('recurrence L_m(P_n), m <= 3, n <= 6', recurrence,
            TOL_RECURRENCE),
        Row('Bieberbach |c_3 - c_2^2| <= 1 (negative margin)',
            max(0.0, -margin), 0.0)
    ]
    rows += [Row(f'L_{k}: literal coordinate formula offset',
                 virasoro.coordinate_discrepancy(k, coords), None, True)
             for k in range(0, 4)]
    return rows


@suite('conjecture-i')
def conjecture_i() -> List[Row]:
    traj = custom_trajectory()
    gaps = [abs(report.dSE_dt_fd - report.dSE_dt_omega)
            for _, report in traj.records]
    return [Row('custom driver: finite difference vs Omega route',
                _max(gaps), None, True)]


def run_suite(name: str) -> List[Row]:
    """
    Run a registered suite, or every suite for 'all'.

    :param name: The suite name.
    :return: The rows of the residual table.
    """
    if name == 'all':
        return [row for key in SUITES for row in run_suite(key)]
    logging.info(f'Running suite {name}')
    rows = SUITES[name]()
    failed = [row.name for row in rows if not row.passed]
    if failed:
        logging.warning(f'FAIL {name}: {", ".join(failed)}')
    else:
        logging.info(f'OK {name}')
    return rows
