from configparser import ConfigParser
from pathlib import Path
from typing import Optional

import numpy as np
from numpy.polynomial import legendre

from backend.algebra import virasoro
from backend.growth import geometry
from backend.series import pseries
from backend.spectral import circlegrid
from models.actionreport import ActionReport
from models.circlesamples import CircleSamples, VectorFieldS1
from models.mapstate import MapState

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

QUADRATURE_ANGLES = _cfg['Actions'].getint('QuadratureAngles')
QUADRATURE_RADII = _cfg['Actions'].getint('QuadratureRadii')


def _grid(f: MapState, M: Optional[int]) -> int:
    return M if M is not None else circlegrid.grid_size(f.N)


def energy(f: MapState) -> float:
    """
    Kinetic energy E = 2 pi log f'(0), the log of the conformal radius.
    """
    return float(2 * np.pi * np.log(f.alpha))


def log_action(f: MapState) -> float:
    """
    Logarithmic action
    S = int_U (|f''/f' + 1/zeta|^2 - 1/|zeta|^2) + 2 pi log f'(0).

    The cross terms between 1/zeta and the analytic part integrate to zero over
    every circle |zeta| = r, leaving S = pi sum |b_k|^2 / (k + 1) + 2 pi log
    alpha for f''/f' = sum b_k zeta^k.

    :param f: The map.
    :return: The value of S.
    """
    b = pseries.prelog_derivative(f).coeffs
    k = np.arange(b.size)
    return float(np.pi * np.sum(np.abs(b) ** 2 / (k + 1)) + energy(f))


def log_action_quadrature(f: MapState, eps: float,
                          angles: int = QUADRATURE_ANGLES,
                          radii: int = QUADRATURE_RADII) -> float:
    """
    Logarithmic action by quadrature over the annulus eps < |zeta| < 1 plus the
    regularizing 2 pi log eps. The 1/|zeta|^2 part of |h + 1/zeta|^2 cancels
    the regularization exactly, so the integrand is |h|^2 + 2 Re(h zeta)/r^2
    with h = f''/f' evaluated directly from the polynomials.

    :param f: The map.
    :param eps: The radius of the removed disk, 0 < eps < 1.
    :param angles: Number of trapezoid points in theta.
    :param radii: Number of Gauss-Legendre points in r.
    :return: The regularized action, converging to log_action as eps -> 0.
    """
    if not 0 < eps < 1:
        raise ValueError(f'eps = {eps} is not in (0, 1)')
    nodes, weights = legendre.leggauss(radii)
    r = 0.5 * (1 - eps) * nodes + 0.5 * (1 + eps)
    wr = 0.5 * (1 - eps) * weights
    theta = circlegrid.theta_grid(angles)
    zeta = r[:, None] * np.exp(1j * theta[None, :])

    fp = pseries.derivative(f.series)
    h = pseries.evaluate(pseries.derivative(fp), zeta) / \
        pseries.evaluate(fp, zeta)
    integrand = np.abs(h) ** 2 + 2 * np.real(h * zeta) / r[:, None] ** 2

    # Trapezoid in theta, then Gauss-Legendre in r with the Jacobian r
    ring = 2 * np.pi * integrand.mean(axis=1)
    return float(np.sum(wr * r * ring) + energy(f))


def energy_rate(f: MapState, M: Optional[int] = None) -> float:
    """
    dE/dt = int_0^{2 pi} dtheta / |f'|^2 along the Laplacian growth.
    """
    M = _grid(f, M)
    fp = geometry.checked_fprime(f, M)
    return circlegrid.quad_trapezoid(CircleSamples(1 / np.abs(fp) ** 2)).real


def curvature_integral(f: MapState, M: Optional[int] = None) -> float:
    """
    Return 2 int kappa^2 dtheta, the curvature part of d(S + E)/dt.
    """
    kappa = geometry.curvature(f, M).values
    return 2 * circlegrid.quad_trapezoid(CircleSamples(kappa ** 2)).real


def schwarzian_integral(f: MapState, M: Optional[int] = None) -> float:
    M = _grid(f, M)
    fp = geometry.checked_fprime(f, M)
    s = geometry.boundary_schwarzian(f, M).values
    zeta = np.exp(1j * circlegrid.theta_grid(M))
    integrand = 2 / np.abs(fp) ** 2 * np.real(zeta ** 2 * s)
    return circlegrid.quad_trapezoid(CircleSamples(integrand)).real


def action_energy_rate(f: MapState, M: Optional[int] = None) -> float:
    """
    d(S + E)/dt = 2 int kappa^2 + int (2/|f'|^2) Re(e^{2 i theta} S_f).

    :param f: The map.
    :param M: The grid size.
    :return: The rate of the sum of the action and the energy.
    """
    return curvature_integral(f, M) + schwarzian_integral(f, M)


def proof_identity_residual(f: MapState, M: Optional[int] = None) -> float:
    """
    Absolute difference of the two sides of

        int (Im u)^2 / |f'|^2 = -(1/2) int Re(u^2/2 + zeta^2 S_f - 1/2) / |f'|^2

    with u = 1 + zeta f''/f', an integration by parts identity which turns
    the rate of S into curvature and Schwarzian terms.
    """
    M = _grid(f, M)
    fp = geometry.checked_fprime(f, M)
    fpp = circlegrid.sample_map(f, M, 2).values
    s = geometry.boundary_schwarzian(f, M).values
    zeta = np.exp(1j * circlegrid.theta_grid(M))
    u = 1 + zeta * fpp / fp
    weight = 1 / np.abs(fp) ** 2

    lhs = circlegrid.quad_trapezoid(CircleSamples(weight * u.imag ** 2)).real
    rhs_integrand = weight * np.real(0.5 * u ** 2 + zeta ** 2 * s - 0.5)
    rhs = -0.5 * circlegrid.quad_trapezoid(CircleSamples(rhs_integrand)).real
    return abs(lhs - rhs)


def log_metric_density(f: MapState, zeta: complex) -> float:
    """
    Density phi = -log |zeta f'(zeta)|^2 of the pulled back metric |dz/z|^2 on
    the disk. It is harmonic away from the origin.
    """
    fp = pseries.evaluate(pseries.derivative(f.series), zeta)
    return float(-np.log(np.abs(zeta * fp) ** 2))


def lk_energy_rate(p0: float) -> float:
    """
    dE/dt = 2 pi p(0) for any Loewner-Kufarev evolution, since
    d alpha / dt = alpha p(0).
    """
    return 2 * np.pi * p0


def action_report(f: MapState, M: Optional[int] = None,
                  nu: Optional[VectorFieldS1] = None,
                  p0: Optional[float] = None) -> ActionReport:
    """
    Compute the energy, the action and their rates at one state. The Omega
    route pairs the Schwarzian form of f / alpha with nu, which defaults to the
    Laplacian growth field 2/|f'|^2.

    :param f: The map.
    :param M: The grid size.
    :param nu: The driving vector field, None for the Laplacian growth.
    :param p0: The driver value p(0), only used with a custom nu.
    :return: The ActionReport. Its finite difference rate is NaN until filled.
    """
    M = _grid(f, M)
    fp = geometry.checked_fprime(f, M)
    if nu is None:
        nu = VectorFieldS1(2 / np.abs(fp) ** 2)
        dE_dt = energy_rate(f, M)
    else:
        dE_dt = lk_energy_rate(p0) if p0 is not None else energy_rate(f, M)

    curv_sq = curvature_integral(f, M)
    theorem = curv_sq + schwarzian_integral(f, M)
    omega = virasoro.omega_pairing(f.normalized(), nu)
    report = ActionReport(
        E=energy(f),
        S=log_action(f),
        dE_dt=dE_dt,
        dSE_dt_theorem=theorem,
        dSE_dt_fd=float('nan'),
        dSE_dt_omega=curv_sq + omega.real,
        curv_sq_integral=curv_sq,
        residuals={'proof_identity': proof_identity_residual(f, M)}
    )
    report.residuals['theorem_vs_omega'] = \
        abs(report.dSE_dt_theorem - report.dSE_dt_omega)
    return report
