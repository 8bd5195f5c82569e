import math
import unittest
import warnings

import numpy as np

from backend import constants
from backend.exceptions import ConfigError, CuspReached, InvalidMapState, \
    NonHerglotzDriver, OutOfRange, SpectralUnderresolved
from backend.growth import dynamics, geometry
from backend.spectral import circlegrid
from models.circlesamples import VectorFieldS1
from models.mapstate import MapState
from models.powerseries import PowerSeries
from models.scenario import Driver, Scenario

CARDIOID = MapState.from_coeffs([0, 1, 0.3], N=32)


def integrate(f: MapState, dt: float, t_end: float) -> MapState:
    while f.t < t_end - 1e-12:
        f = dynamics.step(f, min(dt, t_end - f.t), dynamics.pg_rhs)
    return f


class TestRightHandSide(unittest.TestCase):

    def test_pg_rhs_quadratic(self) -> None:
        fdot = dynamics.pg_rhs(CARDIOID)
        exact = dynamics.exact_quadratic_rate(CARDIOID)
        self.assertLess(np.max(np.abs(fdot.coeffs - exact.coeffs)), 1e-12)
        self.assertLess(dynamics.pg_residual(CARDIOID, fdot), 1e-10)

    def test_pg_rhs_circle(self) -> None:
        f = MapState.from_coeffs([0, 2.5], N=8)
        fdot = dynamics.pg_rhs(f)
        np.testing.assert_allclose(fdot.coeffs, np.eye(1, 9, 1)[0] / 2.5,
                                   atol=1e-15)
        self.assertLess(dynamics.pg_residual(f, fdot), 1e-14)
        self.assertEqual(dynamics.pg_rhs(CARDIOID).coeffs[0], 0)

        identity = MapState.from_coeffs([0, 1], N=8)
        self.assertAlmostEqual(
            dynamics.pg_residual(identity, PowerSeries.zeros(8)), 1)

    def test_lk_rhs(self) -> None:
        scaling = dynamics.lk_rhs(CARDIOID, VectorFieldS1(np.zeros(512)), 1.0)
        np.testing.assert_allclose(scaling.coeffs[:3], [0, 1, 0.6],
                                   atol=1e-15)

        identity = MapState.from_coeffs([0, 1], N=8)
        nu = VectorFieldS1.from_modes(0.0, [(1, 1.0, 0.0)], 64)
        fdot = dynamics.lk_rhs(identity, nu, 1.0)
        np.testing.assert_allclose(fdot.coeffs[:3], [0, 1, 0.5], atol=1e-15)

    def test_lk_matches_pg(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.2, 0.05], N=32)
        M = 512
        rho = 1 / np.abs(circlegrid.sample_map(f, M, 1).values) ** 2

        # Re p = p0 + nu / 2 on the circle
        lk = dynamics.lk_rhs(f, VectorFieldS1(2 * rho), float(np.mean(rho)),
                             M)
        pg = dynamics.pg_rhs(f, M)
        self.assertLess(np.max(np.abs(lk.coeffs - pg.coeffs)), 1e-13)

    def test_non_herglotz_driver(self) -> None:
        nu = VectorFieldS1.from_modes(0.0, [(1, 1.0, 0.0)], 512)
        with self.assertRaises(NonHerglotzDriver):
            dynamics.lk_rhs(CARDIOID, nu, 0.1)


class TestExactQuadratic(unittest.TestCase):

    def test_invariants(self) -> None:
        a0, b0, t = 1.0, 0.3, 0.7
        f = dynamics.exact_quadratic(a0, b0, t)
        a, b = f.coeffs[1].real, f.coeffs[2].real
        self.assertAlmostEqual(a ** 2 * b, a0 ** 2 * b0, places=12)
        self.assertAlmostEqual(geometry.area(f),
                               math.pi * (a0 ** 2 + 2 * b0 ** 2 + 2 * t),
                               places=12)
        self.assertEqual(f.t, t)

    def test_limits(self) -> None:
        circle = dynamics.exact_quadratic(1.0, 0.0, 0.3)
        np.testing.assert_allclose(circle.coeffs[:3], [0, math.sqrt(1.6), 0],
                                   atol=1e-14)
        start = dynamics.exact_quadratic(1.0, 0.1, 0.0)
        np.testing.assert_allclose(start.coeffs[:3], [0, 1, 0.1], atol=1e-12)

    def test_errors(self) -> None:
        with self.assertRaises(InvalidMapState):
            dynamics.exact_quadratic(1.0, 0.6, 0.1)
        with self.assertRaises(CuspReached):
            dynamics.exact_quadratic(1.0, 0.3, -0.3)

    def test_stepper_matches(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.1], N=32)
        end = integrate(f, 1e-2, 0.3)
        exact = dynamics.exact_quadratic(1.0, 0.1, 0.3)
        self.assertLess(np.max(np.abs(end.coeffs - exact.coeffs)), 1e-8)

    def test_single_step(self) -> None:
        f = MapState.from_coeffs([0, 1], t=0.5, N=8)
        g = dynamics.step(f, 1e-3, dynamics.pg_rhs)
        self.assertAlmostEqual(g.t, 0.501)
        self.assertLess(abs(g.alpha - math.sqrt(2 * 0.501)), 1e-12)

    def test_fourth_order(self) -> None:
        errors = []
        for dt in (0.05, 0.025):
            f = integrate(MapState.from_coeffs([0, 1], t=0.5, N=8), dt, 1.5)
            errors.append(abs(f.alpha - math.sqrt(2 * f.t)))
        self.assertAlmostEqual(errors[0] / errors[1], 16, delta=2)


class TestGrowthRun(unittest.TestCase):

    def test_circle_law(self) -> None:
        initial = MapState.from_coeffs([0, 1], t=0.5, N=16)
        traj = dynamics.run(Scenario(initial, dt=1e-3, t_end=1.0, M=128))
        self.assertEqual(traj.status, constants.COMPLETED)
        self.assertAlmostEqual(traj.t_final, 1.0)
        for state, report in traj.records:
            self.assertLess(abs(report.dE_dt - math.pi / state.t), 1e-6)
            self.assertLess(abs(report.dSE_dt_theorem - 2 * math.pi / state.t),
                            1e-6)
        self.assertLess(dynamics.circle_law_residual(traj), 1e-6)
        self.assertAlmostEqual(dynamics.fd_rate(traj, 'E', 0.75,
                                                richardson=True),
                               math.pi / 0.75, places=6)

    def test_cardioid_theorem(self) -> None:
        traj = dynamics.run(Scenario(CARDIOID, dt=1e-4, t_end=0.4),
                            stride=100)
        filled = [report for _, report in traj.records
                  if 'theorem_vs_fd' in report.residuals]
        self.assertGreater(len(filled), 10)
        for report in filled:
            self.assertLess(report.residuals['theorem_vs_fd'], 1e-5)
        for _, report in traj.records:
            self.assertLess(report.residuals['theorem_vs_omega'], 1e-10)
            self.assertLess(report.residuals['pg_residual'], 1e-9)

        drifts = dynamics.drifts(traj)
        self.assertLess(drifts['area_slope_rel'], 1e-6)
        self.assertLess(drifts['M1'], 1e-6)
        self.assertLess(drifts['M2'], 1e-6)
        self.assertAlmostEqual(dynamics.fd_rate(traj, 'area', 0.2),
                               2 * math.pi, places=8)
        self.assertEqual(traj.flags, [])

    def test_deterministic(self) -> None:
        s = Scenario(CARDIOID, dt=1e-2, t_end=0.1)
        first, second = dynamics.run(s, stride=2), dynamics.run(s, stride=2)
        self.assertEqual(len(first.states), len(second.states))
        for a, b in zip(first.states, second.states):
            self.assertEqual(a.t, b.t)
            np.testing.assert_array_equal(a.coeffs, b.coeffs)
        for (_, a), (_, b) in zip(first.records, second.records):
            np.testing.assert_array_equal(
                [a.E, a.S, a.dSE_dt_theorem, a.dSE_dt_fd, a.dSE_dt_omega],
                [b.E, b.S, b.dSE_dt_theorem, b.dSE_dt_fd, b.dSE_dt_omega])
            self.assertEqual(a.residuals, b.residuals)

    def test_alpha_increases(self) -> None:
        traj = dynamics.run(Scenario(CARDIOID, dt=1e-2, t_end=0.2))
        times = np.array([state.t for state in traj.states])
        alphas = np.array([state.alpha for state in traj.states])
        self.assertTrue(np.all(np.diff(times) > 0))
        self.assertTrue(np.all(np.diff(alphas) > 0))

    def test_near_cusp_start_smooths(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.49], N=32)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', SpectralUnderresolved)
            traj = dynamics.run(Scenario(f, dt=1e-3, t_end=0.5, M=1024),
                                stride=500)
        self.assertEqual(traj.status, constants.COMPLETED)
        self.assertAlmostEqual(traj.t_final, 0.5)
        self.assertGreater(geometry.cusp_indicator(traj.states[-1], 1024),
                           geometry.cusp_indicator(f, 1024))

    def test_events(self) -> None:
        counts = {'step accepted': 0, 'report ready': 0, 'run finished': 0}

        def counter(event: str):
            def handler(run: dynamics.GrowthRun) -> None:
                counts[event] += 1
            return handler

        growth = dynamics.GrowthRun(Scenario(CARDIOID, dt=1e-2, t_end=0.1),
                                    stride=5)
        for event in counts:
            growth.on(event, counter(event))
        traj = growth.run()
        self.assertEqual(counts['step accepted'], 10)
        self.assertEqual(counts['report ready'], 3)
        self.assertEqual(counts['run finished'], 1)
        self.assertEqual(len(traj.states), 11)

    def test_short_last_step(self) -> None:
        traj = dynamics.run(Scenario(CARDIOID, dt=0.03, t_end=0.1), stride=1)
        self.assertEqual(traj.t_final, 0.1)
        self.assertEqual(len(traj.states), 5)
        self.assertIs(traj.state_at(0.1), traj.states[-1])
        with self.assertRaises(OutOfRange):
            traj.state_at(0.5)

    def test_cusp_stop(self) -> None:
        s = Scenario(CARDIOID, dt=1e-2, t_end=0.1, cusp_threshold=0.5)
        traj = dynamics.run(s)
        self.assertEqual(traj.status, constants.CUSP_STOP)
        self.assertIn("min |f'|", traj.message)

    def test_scenario_cusp_threshold(self) -> None:
        # Under f_t = zeta f', min |f'| = e^t - 0.9995 e^{2t} falls from 5e-4
        f = MapState.from_coeffs([0, 1, 0.49975], N=8)
        driver = Driver.from_modes(1.0, 0.0, [])
        traj = dynamics.run(Scenario(f, dt=1e-4, t_end=1e-3, driver=driver,
                                     cusp_threshold=2.5e-4), stride=1)
        self.assertEqual(traj.status, constants.CUSP_STOP)
        self.assertEqual(len(traj.states), 3)
        self.assertAlmostEqual(traj.t_final, 2e-4)
        self.assertIn('t = 0.0003', traj.message)

        default = dynamics.run(Scenario(f, dt=1e-4, t_end=1e-3, driver=driver))
        self.assertEqual(default.status, constants.CUSP_STOP)
        self.assertEqual(len(default.states), 1)
        self.assertIn('below 0.001', default.message)

    def test_error_status(self) -> None:
        driver = Driver.from_modes(0.1, 0.0, [(1, 1.0, 0.0)])
        traj = dynamics.run(Scenario(CARDIOID, dt=1e-2, t_end=0.1,
                                     driver=driver))
        self.assertEqual(traj.status, constants.ERROR)
        self.assertIn('min Re p', traj.message)

    def test_underresolved_flag(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.2, 0.05], N=6)
        with self.assertWarns(Warning):
            traj = dynamics.run(Scenario(f, dt=1e-3, t_end=0.005))
        self.assertTrue(any(flag.startswith('SpectralUnderresolved')
                            for flag in traj.flags))

    def test_custom_driver_rate(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.2, 0.05], N=32)
        driver = Driver.from_modes(0.8, 0.0, [(2, 0.2, 0.1)])
        traj = dynamics.run(Scenario(f, dt=1e-3, t_end=0.1, driver=driver))
        self.assertEqual(traj.status, constants.COMPLETED)
        rate = dynamics.fd_rate(traj, 'log_alpha', 0.05, richardson=True)
        self.assertAlmostEqual(rate, 0.8, places=8)
        for _, report in traj.records:
            self.assertAlmostEqual(report.dE_dt, 2 * math.pi * 0.8)

    def test_time_dependent_driver(self) -> None:
        # log alpha = 0.8 t + t^2 / 2
        f = MapState.from_coeffs([0, 1, 0.2, 0.05], N=32)
        driver = Driver.from_modes(0.8, 0.0, [(2, 0.2, 0.1, 0.5, 0.0)],
                                   p0_rate=1.0)
        traj = dynamics.run(Scenario(f, dt=1e-3, t_end=0.1, driver=driver))
        self.assertEqual(traj.status, constants.COMPLETED)
        self.assertAlmostEqual(dynamics.fd_rate(traj, 'log_alpha', 0.05),
                               0.85, places=8)
        for state, report in traj.records:
            self.assertAlmostEqual(report.dE_dt,
                                   2 * math.pi * (0.8 + state.t))

    def test_fd_step_guard(self) -> None:
        traj = dynamics.run(Scenario(CARDIOID, dt=1e-2, t_end=0.2))
        with self.assertRaises(OutOfRange):
            dynamics.fd_rate(traj, 'S+E', 0.1, h=0.05)
        with self.assertRaises(OutOfRange):
            dynamics.fd_rate(traj, 'volume', 0.1)


class TestScenario(unittest.TestCase):

    def test_validation(self) -> None:
        with self.assertRaises(ConfigError):
            Scenario(CARDIOID, dt=0, t_end=1)
        with self.assertRaises(ConfigError):
            Scenario(CARDIOID, dt=1e-3, t_end=0)
        with self.assertRaises(ConfigError):
            Scenario(CARDIOID, dt=1e-3, t_end=1, M=64)
        with self.assertRaises(ConfigError):
            Scenario(CARDIOID, dt=1e-3, t_end=1,
                     driver=Driver.from_modes(0.0, 0.0, []))


if __name__ == '__main__':
    unittest.main()
