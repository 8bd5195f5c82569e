import unittest
import warnings

import numpy as np

from backend import diagnostics
from backend.exceptions import GridTooSmall, NonRealInput, \
    SpectralUnderresolved
from backend.series import pseries
from backend.spectral import circlegrid
from models.circlesamples import CircleSamples, VectorFieldS1
from models.mapstate import MapState
from models.powerseries import PowerSeries

M = 64


class TestGrid(unittest.TestCase):

    def test_grid_size(self) -> None:
        self.assertEqual(circlegrid.grid_size(32), 512)
        self.assertEqual(circlegrid.grid_size(16), 256)
        self.assertEqual(circlegrid.grid_size(3, factor=4), 16)

    def test_synthesize(self) -> None:
        s = PowerSeries([0.5, 1, 0.2j, 0.05])
        theta = circlegrid.theta_grid(M)
        expected = pseries.evaluate(s, np.exp(1j * theta))
        np.testing.assert_allclose(circlegrid.synthesize(s, M).values,
                                   expected, atol=1e-14)
        with self.assertRaises(GridTooSmall):
            circlegrid.synthesize(s, 3)

    def test_sample_map_grid(self) -> None:
        f = MapState.from_coeffs([0, 1, 0.3], N=16)
        with self.assertRaises(GridTooSmall):
            circlegrid.sample_map(f, 32)
        fp = circlegrid.sample_map(f, M * 2, 1).values
        self.assertAlmostEqual(fp[0], 1.6)

    def test_fourier(self) -> None:
        theta = circlegrid.theta_grid(M)
        g = circlegrid.fourier(CircleSamples(2 + np.cos(3 * theta), real=True))
        self.assertAlmostEqual(g[M // 2], 2)
        self.assertAlmostEqual(g[M // 2 + 3], 0.5)
        self.assertAlmostEqual(g[M // 2 - 3], 0.5)
        back = circlegrid.inverse_fourier(g, real=True).values
        np.testing.assert_allclose(back, 2 + np.cos(3 * theta), atol=1e-14)

    def test_spectral_derivative(self) -> None:
        theta = circlegrid.theta_grid(M)
        samples = CircleSamples(np.sin(3 * theta), real=True)
        d1 = circlegrid.spectral_derivative(samples)
        d2 = circlegrid.spectral_derivative(samples, 2)
        self.assertTrue(d1.real)
        np.testing.assert_allclose(d1.values, 3 * np.cos(3 * theta),
                                   atol=1e-12)
        np.testing.assert_allclose(d2.values, -9 * np.sin(3 * theta),
                                   atol=1e-12)

    def test_quad_trapezoid(self) -> None:
        theta = circlegrid.theta_grid(M)
        integral = circlegrid.quad_trapezoid(
            CircleSamples(np.cos(theta) ** 2, real=True))
        self.assertAlmostEqual(integral, np.pi)

    def test_tail_ratio(self) -> None:
        theta = circlegrid.theta_grid(M)
        g = circlegrid.fourier(CircleSamples(1 + np.cos(10 * theta)))
        self.assertAlmostEqual(circlegrid.tail_ratio(g, 4), 1 / 3)
        self.assertLess(circlegrid.tail_ratio(g, 10), 1e-25)


class TestHerglotz(unittest.TestCase):

    def test_extension(self) -> None:
        theta = circlegrid.theta_grid(M)
        rho = CircleSamples(1 + 0.5 * np.cos(theta), real=True)
        p = circlegrid.herglotz_extend(rho, 4)
        np.testing.assert_allclose(p.coeffs, [1, 0.5, 0, 0, 0], atol=1e-15)

        # Re p on the circle gives back the data
        values = circlegrid.synthesize(p, M).values
        np.testing.assert_allclose(values.real, rho.values, atol=1e-14)

    def test_errors(self) -> None:
        theta = circlegrid.theta_grid(M)
        with self.assertRaises(NonRealInput):
            circlegrid.herglotz_extend(CircleSamples(1 + 1j * np.sin(theta)),
                                       4)
        with self.assertRaises(GridTooSmall):
            circlegrid.herglotz_extend(CircleSamples(np.ones(8), real=True), 4)

    def test_underresolved(self) -> None:
        theta = circlegrid.theta_grid(M)
        rho = CircleSamples(1 + np.cos(10 * theta), real=True)
        with self.assertWarns(SpectralUnderresolved):
            circlegrid.herglotz_extend(rho, 4)

    def test_truncated_extension_positivity(self) -> None:
        # Gibbs undershoot of a positive square wave cut at degree 8
        theta = circlegrid.theta_grid(M)
        rho = CircleSamples(np.where(theta < np.pi, 1.0, 1e-3), real=True)
        with warnings.catch_warnings(), diagnostics.collecting() as caught:
            warnings.simplefilter('ignore', SpectralUnderresolved)
            circlegrid.herglotz_extend(rho, 8)
        self.assertTrue(any('min Re p' in message for message in caught))

        smooth = CircleSamples(1 + 0.9 * np.cos(theta), real=True)
        with diagnostics.collecting() as caught:
            p = circlegrid.herglotz_extend(smooth, 8)
        self.assertEqual(caught, [])
        self.assertAlmostEqual(circlegrid.min_real_part(p, M), 0.1)

    def test_lk_driver(self) -> None:
        nu = VectorFieldS1.from_modes(0.0, [(1, 1.0, 0.0)], M)
        p = circlegrid.lk_driver(nu, 2.0, 4)
        np.testing.assert_allclose(p.coeffs, [2, 0.5, 0, 0, 0], atol=1e-15)
        self.assertAlmostEqual(circlegrid.min_real_part(p, M), 1.5)
        with self.assertRaises(GridTooSmall):
            circlegrid.lk_driver(VectorFieldS1(np.ones(8)), 1.0, 4)

    def test_semiflow_generator(self) -> None:
        nu = VectorFieldS1.from_modes(0.0, [(1, 1.0, 0.0)], M)
        v = circlegrid.semiflow_generator(nu, 2.0, 4)
        np.testing.assert_allclose(v.coeffs, [0, -2, -0.5, 0, 0], atol=1e-15)

        # Re(v / zeta) = -Re p <= 0 on the circle
        zeta = np.exp(1j * circlegrid.theta_grid(M))
        ratio = circlegrid.synthesize(v, M).values / zeta
        self.assertLessEqual(np.max(ratio.real), 0)


if __name__ == '__main__':
    unittest.main()
