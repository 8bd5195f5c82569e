import json
import math
import unittest

import numpy as np

from backend import constants
from backend.exceptions import ChargeMismatch, ConfigError, GridMismatch, \
    InvalidMapState, OutOfRange
from backend.growth import dynamics
from cli import writers
from models.circlesamples import VectorFieldS1
from models.mapstate import MapState
from models.runconfig import RunConfig
from models.scenario import Scenario
from models.summary import RunSummary
from models.virasoro import CentralElement


def config(**scenario) -> dict:
    d = {'initial': [[0, 0], [1, 0], [0.3, 0]], 't_end': 0.1, 'dt': 0.01}
    d.update(scenario)
    return {'scenario': d}


class TestMapState(unittest.TestCase):

    def test_gauge(self) -> None:
        f = MapState.from_coeffs([0, 1j, 0.3])
        np.testing.assert_allclose(f.coeffs, [0, 1, -0.3], atol=1e-15)
        self.assertAlmostEqual(f.alpha, 1)

    def test_invalid(self) -> None:
        with self.assertRaises(InvalidMapState):
            MapState.from_coeffs([0.5, 1])
        with self.assertRaises(InvalidMapState):
            MapState.from_coeffs([0, 0, 1])
        with self.assertRaises(InvalidMapState):
            MapState.from_coeffs([0])

    def test_normalized(self) -> None:
        f = MapState.from_coeffs([0, 2, 0.4], N=4)
        self.assertFalse(f.is_normalized())
        g = f.normalized()
        self.assertTrue(g.is_normalized())
        self.assertAlmostEqual(g.coeffs[2], 0.2)

    def test_pairs(self) -> None:
        f = MapState.from_pairs([[0, 0], [1, 0], [0.1, 0.2]], N=5)
        self.assertEqual(f.N, 5)
        self.assertEqual(f.as_pairs()[2], [0.1, 0.2])


class TestCircleFunctions(unittest.TestCase):

    def test_modes(self) -> None:
        nu = VectorFieldS1.from_modes(1.0, [(2, 0.5, -0.25)], 32)
        self.assertAlmostEqual(nu.mode(0), 1.0)
        self.assertAlmostEqual(nu.mode(2), 0.25 + 0.125j)
        self.assertAlmostEqual(nu.mode(-2), 0.25 - 0.125j)

    def test_grid_mismatch(self) -> None:
        with self.assertRaises(GridMismatch):
            VectorFieldS1(np.ones(16)) + VectorFieldS1(np.ones(32))

    def test_central_element(self) -> None:
        field = VectorFieldS1(np.ones(16))
        total = CentralElement(field, 1.0, 2.0) + CentralElement(field, 0.5,
                                                                 2.0)
        self.assertEqual(total.central, 1.5)
        self.assertAlmostEqual(total.norm(), 3.5)
        with self.assertRaises(ChargeMismatch):
            CentralElement(field, 0, 1.0) + CentralElement(field, 0, 2.0)


class TestRunConfig(unittest.TestCase):

    def test_defaults(self) -> None:
        rc = RunConfig(config())
        self.assertEqual(rc.scenario.N, 2)
        self.assertEqual(rc.scenario.dt, 0.01)
        self.assertTrue(rc.scenario.driver.is_laplacian_growth)
        self.assertEqual(rc.formats, ['timeseries', 'boundary', 'summary'])
        self.assertEqual(set(rc.checks), {'theorem1', 'omega', 'circle-law',
                                          'conservation', 'proof-identity',
                                          'pg-residual'})
        self.assertIsNone(rc.directory)

    def test_padding(self) -> None:
        rc = RunConfig(config(N=16, M=128))
        self.assertEqual(rc.scenario.initial.N, 16)
        self.assertEqual(rc.scenario.M, 128)

    def test_custom_driver(self) -> None:
        d = config(driver={'kind': 'custom', 'p0': 1.0,
                           'modes': [{'k': 2, 'cos': 0.2}]})
        driver = RunConfig(d).scenario.driver
        self.assertEqual(driver.kind, constants.CUSTOM)
        self.assertEqual(driver.p0_at(0.3), 1.0)
        nu = driver.vector_field(0.0, 16)
        self.assertAlmostEqual(nu.mode(2), 0.1)

    def test_time_dependent_driver(self) -> None:
        d = config(driver={'kind': 'custom', 'p0': 1.0, 'p0_rate': 2.0,
                           'modes': [{'k': 1, 'cos': 0.2, 'cos_rate': 1.0}]})
        driver = RunConfig(d).scenario.driver
        self.assertAlmostEqual(driver.p0_at(0.1), 1.2)
        self.assertAlmostEqual(driver.vector_field(0.0, 16).mode(1), 0.1)
        self.assertAlmostEqual(driver.vector_field(0.1, 16).mode(1), 0.15)

    def test_tolerances(self) -> None:
        d = config()
        d['checks'] = {'enabled': ['omega'], 'tolerances': {'omega': 1e-3}}
        self.assertEqual(RunConfig(d).checks, {'omega': 1e-3})

    def test_errors(self) -> None:
        invalid = [
            config(dt=0),
            config(dt=-1e-3),
            config(t_end='soon'),
            config(initial=[[0, 0]]),
            config(initial=[[0.5, 0], [1, 0]]),
            config(N=16, M=32),
            config(driver={'kind': 'custom', 'p0': 0.0}),
            config(driver={'kind': 'custom', 'p0': 1.0, 'p0_rate': -20.0}),
            config(driver={'kind': 'custom', 'p0': 1.0,
                           'modes': [{'k': 1, 'sin_rate': 'fast'}]}),
            config(driver={'kind': 'custom'}),
            config(driver={'kind': 'suction'}),
            config(driver={'kind': 'custom', 'p0': 1.0,
                           'modes': [{'k': 0, 'cos': 1.0}]}),
            {'scenario': {'initial': [[0, 0], [1, 0]]}},
            {'outputs': {}},
            []
        ]
        for d in invalid:
            with self.assertRaises(ConfigError, msg=str(d)):
                RunConfig(d)

        for key, value in (('stride', 0), ('formats', ['pdf']),
                           ('directory', 3)):
            d = config()
            d['outputs'] = {key: value}
            with self.assertRaises(ConfigError):
                RunConfig(d)

        d = config()
        d['checks'] = {'enabled': ['theorem2']}
        with self.assertRaises(ConfigError):
            RunConfig(d)
        d['checks'] = {'enabled': ['omega'], 'tolerances': {'omega': -1}}
        with self.assertRaises(ConfigError):
            RunConfig(d)


class TestRunSummary(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        initial = MapState.from_coeffs([0, 1, 0.3], N=32)
        cls.traj = dynamics.run(Scenario(initial, dt=1e-4, t_end=0.5),
                                stride=100)

    def test_checks(self) -> None:
        summary = RunSummary(self.traj, {'theorem1': 1e-5, 'omega': 1e-10,
                                         'circle-law': 1e-6})
        values = summary.check_values()
        self.assertEqual(set(values), {'theorem1', 'omega'})
        self.assertTrue(summary.passed)
        self.assertNotIn('circle_law', summary.max_residuals)

        failing = RunSummary(self.traj, {'pg-residual': 1e-30})
        self.assertFalse(failing.passed)

    def test_document(self) -> None:
        summary = RunSummary(self.traj, {'omega': 1e-10})
        d = summary.get_dict()
        self.assertEqual(d['schema_version'], 1)
        self.assertEqual(d['status'], 'Completed')
        self.assertIsNone(d['message'])
        self.assertAlmostEqual(d['t_final'], 0.5)
        self.assertTrue(d['checks']['omega']['passed'])

        summary.drifts['M1'] = math.nan
        parsed = json.loads(writers.summary_json(summary))
        self.assertIsNone(parsed['drifts']['M1'])
        self.assertEqual(parsed['flags'], [])

    def test_state_at(self) -> None:
        self.assertAlmostEqual(self.traj.state_at(0.25).t, 0.25)
        with self.assertRaises(OutOfRange):
            self.traj.state_at(0.6)


if __name__ == '__main__':
    unittest.main()
