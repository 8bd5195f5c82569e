from configparser import ConfigParser
from pathlib import Path
from typing import Any, Dict, List, Optional

from backend import constants
from backend.exceptions import ConfigError, LogGrowthError
from models.mapstate import MapState
from models.scenario import Driver, Scenario

_here = Path(__file__).parent
_cfg = ConfigParser()
_cfg.read([_here.parent / 'config/loggrowth.ini',
           _here.parent / 'config/loggrowth.local.ini'])

DEFAULT_STRIDE = _cfg['Output'].getint('Stride')
DEFAULT_SNAPSHOT_STRIDE = _cfg['Output'].getint('SnapshotStride')
DEFAULT_TIME_STEP = _cfg['Dynamics'].getfloat('TimeStep')

# Check name -> key in the [Checks] section
CHECK_TOLERANCE_KEYS = {
    'theorem1': 'Theorem1',
    'omega': 'Omega',
    'circle-law': 'CircleLaw',
    'conservation': 'Conservation',
    'proof-identity': 'ProofIdentity',
    'pg-residual': 'PgResidual'
}
DEFAULT_TOLERANCES = {name: _cfg['Checks'].getfloat(key)
                      for name, key in CHECK_TOLERANCE_KEYS.items()}
FORMATS = ('timeseries', 'boundary', 'summary')


def _require(d: Dict[str, Any], key: str, path: str) -> Any:
    if key not in d:
        raise ConfigError(f'{path}.{key} is required')
    return d[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f'{path} must be a number, got {value!r}')
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f'{path} must be an integer, got {value!r}')
    return value


def _mapping(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(f'{path} must be an object')
    return value


class RunConfig:
    """
    A validated run configuration, built from the JSON document passed to the
    run command.

    :ivar scenario: The scenario to run.
    :ivar stride: Output stride of the time series, in steps.
    :ivar snapshot_stride: Output stride of boundary snapshots, in steps.
    :ivar directory: Output directory, None to use the command line or the
    environment.
    :ivar formats: Which of the result files to write.
    :ivar checks: Enabled checks mapped to their tolerances.
    """
    scenario: Scenario
    stride: int
    snapshot_stride: int
    directory: Optional[str]
    formats: List[str]
    checks: Dict[str, float]

    def __init__(self, d: Dict[str, Any]) -> None:
        """
        Construct a RunConfig from a parsed JSON document.

        :param d: The document.
        """
        d = _mapping(d, 'config')
        self.scenario = self._parse_scenario(
            _mapping(_require(d, 'scenario', 'config'), 'scenario'))

        outputs = _mapping(d.get('outputs', {}), 'outputs')
        self.stride = _integer(outputs.get('stride', DEFAULT_STRIDE),
                               'outputs.stride')
        self.snapshot_stride = _integer(
            outputs.get('snapshot_stride', DEFAULT_SNAPSHOT_STRIDE),
            'outputs.snapshot_stride')
        if self.stride < 1 or self.snapshot_stride < 1:
            raise ConfigError('outputs strides must be at least 1')
        self.directory = outputs.get('directory')
        if self.directory is not None and not isinstance(self.directory, str):
            raise ConfigError('outputs.directory must be a string')
        self.formats = list(outputs.get('formats', FORMATS))
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ConfigError(f'outputs.formats: unknown format {fmt!r}, '
                                  f'expected one of {FORMATS}')

        checks = _mapping(d.get('checks', {}), 'checks')
        enabled = checks.get('enabled', list(CHECK_TOLERANCE_KEYS))
        tolerances = _mapping(checks.get('tolerances', {}), 'checks.tolerances')
        self.checks = {}
        for name in enabled:
            if name not in CHECK_TOLERANCE_KEYS:
                raise ConfigError(f'checks.enabled: unknown check {name!r}')
            tol = _number(tolerances.get(name, DEFAULT_TOLERANCES[name]),
                          f'checks.tolerances.{name}')
            if not tol > 0:
                raise ConfigError(f'checks.tolerances.{name} must be positive')
            self.checks[name] = tol

    @staticmethod
    def _parse_driver(d: Dict[str, Any]) -> Driver:
        kind = d.get('kind', constants.LAPLACIAN_GROWTH)
        if kind == constants.LAPLACIAN_GROWTH:
            return Driver()
        if kind != constants.CUSTOM:
            raise ConfigError(f'scenario.driver.kind: unknown kind {kind!r}')
        p0 = _number(_require(d, 'p0', 'scenario.driver'),
                     'scenario.driver.p0')
        p0_rate = _number(d.get('p0_rate', 0.0), 'scenario.driver.p0_rate')
        constant = _number(d.get('constant', 0.0), 'scenario.driver.constant')
        modes = []
        for i, mode in enumerate(d.get('modes', [])):
            path = f'scenario.driver.modes[{i}]'
            mode = _mapping(mode, path)
            k = _integer(_require(mode, 'k', path), f'{path}.k')
            if k < 1:
                raise ConfigError(f'{path}.k must be at least 1')
            modes.append((k, *(_number(mode.get(key, 0.0), f'{path}.{key}')
                               for key in ('cos', 'sin', 'cos_rate',
                                           'sin_rate'))))
        return Driver.from_modes(p0, constant, modes, p0_rate)

    def _parse_scenario(self, d: Dict[str, Any]) -> Scenario:
        pairs = _require(d, 'initial', 'scenario')
        if not isinstance(pairs, list) or len(pairs) < 2 or \
                not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise ConfigError('scenario.initial must be a list of [re, im] '
                              'pairs, starting with c_0')
        for i, pair in enumerate(pairs):
            for value in pair:
                _number(value, f'scenario.initial[{i}]')

        N = d.get('N')
        N = _integer(N, 'scenario.N') if N is not None else None
        M = d.get('M')
        M = _integer(M, 'scenario.M') if M is not None else None
        max_steps = d.get('max_steps')
        max_steps = _integer(max_steps, 'scenario.max_steps') \
            if max_steps is not None else None
        cusp = d.get('cusp_threshold')
        cusp = _number(cusp, 'scenario.cusp_threshold') \
            if cusp is not None else None

        try:
            t0 = _number(d.get('t0', 0.0), 'scenario.t0')
            initial = MapState.from_pairs(pairs, t0)
            if N is not None and N < initial.N:
                initial = initial.with_degree(N)
            return Scenario(
                initial,
                dt=_number(d.get('dt', DEFAULT_TIME_STEP), 'scenario.dt'),
                t_end=_number(_require(d, 't_end', 'scenario'),
                              'scenario.t_end'),
                N=N, M=M,
                driver=self._parse_driver(
                    _mapping(d.get('driver', {}), 'scenario.driver')),
                cusp_threshold=cusp,
                max_steps=max_steps,
                error_estimate=bool(d.get('error_estimate', False))
            )
        except ConfigError:
            raise
        except LogGrowthError as e:
            raise ConfigError(f'scenario.initial: {e}')
