import math
from typing import Any, Dict, Optional

from backend import constants
from backend.growth import dynamics
from models.scenario import Trajectory


def _finite_max(values) -> Optional[float]:
    values = [v for v in values if v is not None and not math.isnan(v)]
    return max(values) if values else None


class RunSummary:
    """
    Represents the summary of a run: termination status, worst residuals,
    conserved quantity drifts and the outcome of the enabled checks.

    :ivar trajectory: The trajectory being summarized.
    :ivar tolerances: Enabled checks mapped to their tolerances.
    :ivar max_residuals: The largest value of each residual over the records.
    :ivar drifts: Conserved quantity drifts.
    """
    trajectory: Trajectory
    tolerances: Dict[str, float]
    max_residuals: Dict[str, float]
    drifts: Dict[str, float]

    def __init__(self, trajectory: Trajectory,
                 tolerances: Dict[str, float]) -> None:
        """
        Construct a summary of a trajectory.

        :param trajectory: The trajectory, with its finite difference rates
        filled in.
        :param tolerances: Enabled checks mapped to their tolerances.
        """
        self.trajectory, self.tolerances = trajectory, tolerances
        names = sorted({name for _, report in trajectory.records
                        for name in report.residuals})
        self.max_residuals = {}
        for name in names:
            worst = _finite_max(report.residuals.get(name)
                                for _, report in trajectory.records)
            if worst is not None:
                self.max_residuals[name] = worst
        circle = dynamics.circle_law_residual(trajectory)
        if circle is not None:
            self.max_residuals['circle_law'] = circle
        self.drifts = dynamics.drifts(trajectory)

    def check_values(self) -> Dict[str, float]:
        """
        Return the value compared against the tolerance of each applicable
        check.
        """
        laplacian = self.trajectory.scenario.driver.is_laplacian_growth
        values = {
            'theorem1': self.max_residuals.get('theorem_vs_fd')
            if laplacian else None,
            'omega': self.max_residuals.get('theorem_vs_omega')
            if laplacian else None,
            'circle-law': self.max_residuals.get('circle_law'),
            'proof-identity': self.max_residuals.get('proof_identity'),
            'pg-residual': self.max_residuals.get('pg_residual'),
            'conservation': _finite_max([self.drifts.get('area_slope_rel'),
                                         self.drifts.get('M1'),
                                         self.drifts.get('M2')])
            if laplacian else None
        }
        return {name: values[name] for name in self.tolerances
                if values.get(name) is not None}

    @property
    def passed(self) -> bool:
        return all(value <= self.tolerances[name]
                   for name, value in self.check_values().items())

    def get_dict(self) -> Dict[str, Any]:
        """
        Generate the summary.json document.

        :return: The document, with a fixed schema version.
        """
        traj = self.trajectory
        checks = {name: {'value': value,
                         'tolerance': self.tolerances[name],
                         'passed': value <= self.tolerances[name]}
                  for name, value in self.check_values().items()}
        return {
            'schema_version': constants.SUMMARY_SCHEMA_VERSION,
            'status': traj.status,
            'message': traj.message,
            't_final': traj.t_final if traj.states else None,
            'max_residuals': self.max_residuals,
            'drifts': self.drifts,
            'checks': checks,
            'flags': list(traj.flags)
        }
