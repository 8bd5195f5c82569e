import copy
from typing import Dict, Optional


class ActionReport:
    """
    The energy, the logarithmic action and their rates at one state.

    :ivar E: Kinetic energy 2 pi log alpha.
    :ivar S: Logarithmic action.
    :ivar dE_dt: Rate of the energy.
    :ivar dSE_dt_theorem: d(S + E)/dt from curvature and Schwarzian integrals.
    :ivar dSE_dt_fd: d(S + E)/dt by finite differences along a trajectory, NaN
    when not available.
    :ivar dSE_dt_omega: d(S + E)/dt as 2 int kappa^2 + Re(Omega, nu).
    :ivar curv_sq_integral: 2 int kappa^2 dtheta.
    :ivar residuals: Named residuals of the identities checked at this state.
    """
    E: float
    S: float
    dE_dt: float
    dSE_dt_theorem: float
    dSE_dt_fd: float
    dSE_dt_omega: float
    curv_sq_integral: float
    residuals: Dict[str, float]

    def __init__(self, E: float, S: float, dE_dt: float, dSE_dt_theorem: float,
                 dSE_dt_fd: float, dSE_dt_omega: float,
                 curv_sq_integral: float,
                 residuals: Optional[Dict[str, float]] = None) -> None:
        self.E, self.S, self.dE_dt = E, S, dE_dt
        self.dSE_dt_theorem = dSE_dt_theorem
        self.dSE_dt_fd = dSE_dt_fd
        self.dSE_dt_omega = dSE_dt_omega
        self.curv_sq_integral = curv_sq_integral
        self.residuals = dict(residuals or {})

    def with_fd(self, rate: float) -> 'ActionReport':
        """
        Return a copy with the finite difference rate filled in, along with
        its residual against the theorem route.

        :param rate: The finite difference value of d(S + E)/dt.
        :return: The new report.
        """
        report = copy.deepcopy(self)
        report.dSE_dt_fd = rate
        report.residuals['theorem_vs_fd'] = abs(rate - self.dSE_dt_theorem)
        return report

    def __repr__(self) -> str:
        return f'ActionReport(E={self.E}, S={self.S}, dE_dt={self.dE_dt}, ' \
               f'dSE_dt_theorem={self.dSE_dt_theorem})'
