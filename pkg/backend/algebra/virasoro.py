from configparser import ConfigParser
from pathlib import Path
from typing import Callable, Literal, Tuple, Union

import numpy as np

from backend.exceptions import EvaluationTooCloseToBoundary, NotNormalized, \
    OriginSingularity, OutOfRange, UnsupportedGenerator
from backend.growth import geometry
from backend.series import pseries
from backend.spectral import circlegrid
from models.circlesamples import CircleSamples, VectorFieldS1
from models.mapstate import MapState
from models.powerseries import PowerSeries
from models.virasoro import CentralElement, NeretinValues

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent.parent / 'config/loggrowth.ini',
           _here.parent.parent / 'config/loggrowth.local.ini'])

_vir_cfg = _cfg['Virasoro']
VARIATION_GRID_SIZE = _vir_cfg.getint('VariationGridSize')
BOUNDARY_MARGIN = _vir_cfg.getfloat('BoundaryMargin')
FD_STEP = _vir_cfg.getfloat('FdStep')

BoundaryFunction = Union[Callable[[np.ndarray], np.ndarray], CircleSamples,
                         VectorFieldS1, np.ndarray]
TrigKind = Literal['cos-cos', 'sin-sin', 'sin-cos']


def _require_normalized(f: MapState) -> None:
    if not f.is_normalized():
        raise NotNormalized(f"Expected f'(0) = 1, got {f.coeffs[1]}; pass "
                            f'f.normalized()')


def _boundary_values(nu: BoundaryFunction, M: int) -> np.ndarray:
    if callable(nu):
        return np.asarray(nu(circlegrid.theta_grid(M)), dtype=complex)
    return np.asarray(getattr(nu, 'values', nu), dtype=complex)


def gs_variation(f: MapState, nu: BoundaryFunction, zeta: complex,
                 M: int = VARIATION_GRID_SIZE) -> complex:
    """
    Goluzin-Schiffer variation of a normalized map in the direction nu,

        delta f(zeta) = -(f(zeta)^2 / 2 pi i) int (w f'/f)^2 nu(w) /
                        (f(w) - f(zeta)) dtheta

    over w = e^{i theta}, by the periodic trapezoid rule. The choice
    nu = -i e^{ik theta} gives the generator L_k.

    :param f: A normalized univalent map.
    :param nu: The direction, as a function of theta or as samples on a grid.
    :param zeta: The evaluation point, |zeta| <= BOUNDARY_MARGIN.
    :param M: The contour grid size, ignored when nu is given as samples.
    :return: The value of the variation at zeta.
    """
    _require_normalized(f)
    if abs(zeta) > BOUNDARY_MARGIN:
        raise EvaluationTooCloseToBoundary(f'|zeta| = {abs(zeta):.4f} exceeds '
                                           f'{BOUNDARY_MARGIN}')
    if not callable(nu):
        M = len(_boundary_values(nu, M))
    values = _boundary_values(nu, M)

    w = np.exp(1j * circlegrid.theta_grid(M))
    fw = circlegrid.synthesize(f.series, M).values
    fpw = circlegrid.synthesize(pseries.derivative(f.series), M).values
    fz = pseries.evaluate(f, zeta)
    integrand = (w * fpw / fw) ** 2 * values / (fw - fz)
    return complex(1j * fz ** 2 * np.mean(integrand))


def lk_generator_closed(f: MapState, k: int, zeta: complex) -> complex:
    """
    Closed forms of the generators L_k applied to a normalized map:
    zeta^{1+k} f' for k >= 1, zeta f' - f for k = 0, f' - 1 - 2 c_2 f for
    k = -1 and f'/zeta - 1/f - 3 c_2 + (c_2^2 - 4 c_3) f for k = -2.

    :param f: A normalized map.
    :param k: The index of the generator, between -2 and N.
    :param zeta: The evaluation point.
    :return: The value of L_k f at zeta.
    """
    _require_normalized(f)
    if k < -2:
        raise UnsupportedGenerator(f'No closed form for L_{k}')
    if k > f.N:
        raise UnsupportedGenerator(f'L_{k} exceeds the truncation degree')
    fz = pseries.evaluate(f, zeta)
    fpz = pseries.evaluate(pseries.derivative(f.series), zeta)
    c = np.pad(f.coeffs, (0, 2))
    c2, c3 = c[2], c[3]
    if k >= 1:
        return complex(zeta ** (1 + k) * fpz)
    if k == 0:
        return complex(zeta * fpz - fz)
    if k == -1:
        return complex(fpz - 1 - 2 * c2 * fz)
    if zeta == 0:
        raise OriginSingularity('L_-2 is evaluated through 1/zeta and 1/f')
    return complex(fpz / zeta - 1 / fz - 3 * c2 + (c2 ** 2 - 4 * c3) * fz)


def _full_coordinates(coeffs: np.ndarray) -> np.ndarray:
    # c_0 = 0, c_1 = 1, then c_2 .. c_K
    return np.concatenate([[0, 1], np.asarray(coeffs, dtype=complex)])


def coord_vector_field(k: int, coeffs: np.ndarray) -> np.ndarray:
    """
    Components of L_k along the coordinates c_2, ..., c_K of a normalized map,
    read off the closed-form generators: (j - k) c_{j - k} along c_j for
    k >= 1 (c_1 = 1) and (j - 1) c_j for k = 0.

    :param k: The index of the generator, k >= 0.
    :param coeffs: The coordinates c_2, ..., c_K.
    :return: The components along c_2, ..., c_K.
    """
    if k < 0:
        raise UnsupportedGenerator(f'Coordinate action of L_{k} is not '
                                   f'defined')
    c = _full_coordinates(coeffs)
    K = c.size - 1
    out = np.zeros(K + 1, dtype=complex)
    for j in range(2, K + 1):
        if k == 0:
            out[j] = (j - 1) * c[j]
        elif j - k >= 1:
            out[j] = (j - k) * c[j - k]
    return out[2:]


def coord_vector_field_printed(k: int, coeffs: np.ndarray) -> np.ndarray:
    """
    The coordinate formula L_k = d_k + sum_{n >= 1} (n + 1) c_n d_{k+n} and
    L_0 = sum n c_n d_n taken literally with d_k = d/dc_{k+1} and c_1 = 1.

    :param k: The index of the generator, k >= 0.
    :param coeffs: The coordinates c_2, ..., c_K.
    :return: The components along c_2, ..., c_K.
    """
    if k < 0:
        raise UnsupportedGenerator(f'Coordinate action of L_{k} is not '
                                   f'defined')
    c = _full_coordinates(coeffs)
    K = c.size - 1
    out = np.zeros(K + 2 + k, dtype=complex)
    if k == 0:
        for n in range(1, K + 1):
            out[n + 1] += n * c[n]
    else:
        out[k + 1] += 1
        for n in range(1, K + 1):
            out[k + n + 1] += (n + 1) * c[n]
    return out[2:K + 1]


def coordinate_discrepancy(k: int, coeffs: np.ndarray) -> float:
    """
    Largest difference between the literal coordinate formula and the
    coordinate action of the closed-form generators.
    """
    return float(np.max(np.abs(coord_vector_field_printed(k, coeffs) -
                               coord_vector_field(k, coeffs)), initial=0))


def neretin_from_generatrix(f: MapState, c: float,
                            kmax: int) -> NeretinValues:
    """
    Neretin polynomials from the generatrix sum P_k zeta^k = (c zeta^2 / 12) S_f.

    :param f: A normalized map.
    :param c: The central charge.
    :param kmax: The largest index, at most N - 2.
    :return: P_2, ..., P_kmax.
    """
    _require_normalized(f)
    if kmax > f.N - 2:
        raise OutOfRange(f'kmax = {kmax} exceeds N - 2 = {f.N - 2}')
    s = pseries.schwarzian(f).coeffs
    return NeretinValues(c, [c / 12 * s[k - 2] for k in range(2, kmax + 1)])


def neretin_recurrence_residual(f: MapState, c: float, m: int, n: int,
                                h: float = FD_STEP) -> float:
    """
    Residual of L_m(P_n) = (n + m) P_{n-m} + (c/12) m (m^2 - 1) delta_{n,m},
    with L_m(P_n) the central difference of P_n along coord_vector_field(m).

    :param f: A normalized map.
    :param c: The central charge.
    :param m: The index of the generator, m >= 1.
    :param n: The index of the polynomial, 2 <= n <= N - 2.
    :param h: The coefficient step.
    :return: The absolute residual.
    """
    if m < 1:
        raise UnsupportedGenerator(f'The recurrence is checked for m >= 1, '
                                   f'got {m}')
    _require_normalized(f)
    direction = np.zeros(f.N + 1, dtype=complex)
    direction[2:] = coord_vector_field(m, f.coeffs[2:])

    def p_n(step: float) -> complex:
        moved = MapState(PowerSeries(f.coeffs + step * direction), f.t)
        return neretin_from_generatrix(moved, c, n).P(n)

    lhs = (p_n(h) - p_n(-h)) / (2 * h)
    base = neretin_from_generatrix(f, c, n)
    rhs = (n + m) * base.P(n - m)
    if n == m:
        rhs += c / 12 * m * (m ** 2 - 1)
    return float(abs(lhs - rhs))


def witt_bracket(phi: VectorFieldS1, psi: VectorFieldS1) -> VectorFieldS1:
    """
    Lie bracket of vector fields on the circle, phi psi' - psi phi'.
    """
    phi.samples.check_grid(psi.samples)
    dphi = circlegrid.spectral_derivative(phi.samples).values
    dpsi = circlegrid.spectral_derivative(psi.samples).values
    return VectorFieldS1(phi.values * dpsi - psi.values * dphi)


def trig_field(kind: Literal['cos', 'sin'], n: int, M: int) -> VectorFieldS1:
    theta = circlegrid.theta_grid(M)
    return VectorFieldS1(np.cos(n * theta) if kind == 'cos'
                         else np.sin(n * theta))


def trig_bracket(kind: TrigKind, n: int, m: int, M: int) -> VectorFieldS1:
    """
    Commutators of the trigonometric basis of Vect S^1 by the closed formulas

        [cos n, cos m] = (n-m)/2 sin (n+m) + (n+m)/2 sin (n-m)
        [sin n, sin m] = (m-n)/2 sin (n+m) + (n+m)/2 sin (n-m)
        [sin n, cos m] = (m-n)/2 cos (n+m) - (n+m)/2 cos (n-m)
    """
    theta = circlegrid.theta_grid(M)
    plus, minus = (n + m) * theta, (n - m) * theta
    if kind == 'cos-cos':
        values = (n - m) / 2 * np.sin(plus) + (n + m) / 2 * np.sin(minus)
    elif kind == 'sin-sin':
        values = (m - n) / 2 * np.sin(plus) + (n + m) / 2 * np.sin(minus)
    elif kind == 'sin-cos':
        values = (m - n) / 2 * np.cos(plus) - (n + m) / 2 * np.cos(minus)
    else:
        raise ValueError(f'Unknown bracket kind {kind}')
    return VectorFieldS1(values)


def trig_bracket_residual(kind: TrigKind, n: int, m: int, M: int) -> float:
    """
    Difference between witt_bracket on the basis fields and trig_bracket.
    """
    left, right = kind.split('-')
    computed = witt_bracket(trig_field(left, n, M), trig_field(right, m, M))
    expected = trig_bracket(kind, n, m, M)
    return float(np.max(np.abs(computed.values - expected.values)))


def gelfand_fuks(phi: VectorFieldS1, psi: VectorFieldS1) -> float:
    """
    Gelfand-Fuks cocycle omega(phi, psi) = -(1/4 pi) int (phi' + phi''') psi.
    It vanishes on span{1, cos, sin}.
    """
    phi.samples.check_grid(psi.samples)
    d1 = circlegrid.spectral_derivative(phi.samples, 1).values
    d3 = circlegrid.spectral_derivative(phi.samples, 3).values
    integral = circlegrid.quad_trapezoid(CircleSamples((d1 + d3) *
                                                       psi.values))
    return float(-integral.real / (4 * np.pi))


def vir_bracket(x: CentralElement, y: CentralElement) -> CentralElement:
    """
    [phi + a C, psi + b C] = (phi psi' - phi' psi) + (c/12) omega(phi, psi) C.
    """
    x.check_charge(y)
    return CentralElement(witt_bracket(x.field, y.field),
                          x.charge / 12 * gelfand_fuks(x.field, y.field),
                          x.charge)


def jacobi_residual(x: CentralElement, y: CentralElement,
                    z: CentralElement) -> float:
    total = vir_bracket(x, vir_bracket(y, z)) + \
            vir_bracket(y, vir_bracket(z, x)) + \
            vir_bracket(z, vir_bracket(x, y))
    return total.norm()


def basis_bracket(m: int, n: int, c: float) -> Tuple[int, float, float]:
    """
    Abstract Virasoro bracket on the basis e_k,
    [e_m, e_n] = (n - m) e_{m+n} + (c/12) m (m^2 - 1) delta_{n,-m}.

    :return: The index m + n, the coefficient of e_{m+n} and the central part.
    """
    central = c / 12 * m * (m ** 2 - 1) if n == -m else 0.0
    return m + n, float(n - m), central


def omega_pairing(f: MapState, nu: VectorFieldS1) -> complex:
    """
    Value of the form Omega at nu, int e^{2 i theta} nu S_f dtheta, with the
    Schwarzian of the normalized map sampled on the grid of nu.

    :param f: A normalized map.
    :param nu: The vector field.
    :return: The pairing (Omega, nu)_f.
    """
    _require_normalized(f)
    s = geometry.boundary_schwarzian(f, nu.M).values
    zeta = np.exp(1j * circlegrid.theta_grid(nu.M))
    return circlegrid.quad_trapezoid(CircleSamples(zeta ** 2 * nu.values * s))


def bieberbach_margin(f: MapState) -> float:
    """
    Return 1 - |c_3 - c_2^2| for a normalized map, non-negative for univalent
    maps.
    """
    _require_normalized(f)
    c = np.pad(f.coeffs, (0, 2))
    return float(1 - abs(c[3] - c[2] ** 2))
