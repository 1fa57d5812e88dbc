"""Experiment configuration: defaults < config file < environment < flags."""

import copy
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from fractional.profiles import GridSpec, RadialProfile, read_grid_csv
from identities.checks import CheckSettings
from identities.reports import TOLERANCES
from numerics.errors import ConfigError, DomainError
from numerics.parallel import THREADS_ENV
from numerics.quadrature import QuadratureSpec
from radon.config import GrassmannConfig
from storage.run_store import DEFAULT_DB_PATH

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'quadrature': {
        'rel_tol': 1e-10,
        'abs_tol': 1e-300,
        'max_refinements': 8,
        'composed_rel_tol': 1e-8,
    },
    'grid': {
        't_min': 1e-2,
        't_max': 1e2,
        'points': 512,
        'probe_min': 0.25,
        'probe_max': 4.0,
        'probe_points': 8,
    },
    'monte_carlo': {
        'samples': 100_000,
        'seed': None,
        'streams': 8,
        'workers': None,
    },
    'tolerances': dict(TOLERANCES, semigroup=1e-8, left_inverse=1e-5, mc_z=3.0),
    'output': {
        'format': 'json',
        'directory': None,
    },
    'storage': {
        'enabled': False,
        'path': DEFAULT_DB_PATH,
    },
    'logging': {
        'level': 'WARNING',
    },
}

OUTPUT_FORMATS = ('json', 'csv')


def load_config_file(path: Optional[str], explicit: bool = True) -> Dict[str, Any]:
    """Read a JSON config file.

    A missing file is only an error when the path was named explicitly.

    Raises:
        ConfigError: unreadable or malformed file, or a non-object top level
    """
    if not path:
        return {}
    if not os.path.exists(path):
        if explicit:
            raise ConfigError(f"config file not found: {path}")
        return {}
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        logger.warning("ignoring unknown config section(s) in %s: %s", path, ', '.join(unknown))
    return data


def merge_settings(*layers: Mapping[str, Any]) -> Dict[str, Dict[str, Any]]:
    """Section-wise merge; later layers win, None values do not override."""
    merged = copy.deepcopy(DEFAULTS)
    for layer in layers:
        for section, values in (layer or {}).items():
            if section not in merged:
                continue
            if not isinstance(values, Mapping):
                raise ConfigError(f"config section '{section}' must be an object")
            for key, value in values.items():
                if value is not None:
                    merged[section][key] = value
    return merged


def environment_layer() -> Dict[str, Dict[str, Any]]:
    raw = os.environ.get(THREADS_ENV, '')
    if not raw:
        return {}
    try:
        return {'monte_carlo': {'workers': max(1, int(raw))}}
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def quadrature_spec(section: Mapping[str, Any], composed: bool = False) -> QuadratureSpec:
    try:
        spec = QuadratureSpec(rel_tol=float(section['rel_tol']),
                              abs_tol=float(section['abs_tol']),
                              max_refinements=int(section['max_refinements']))
        if composed:
            spec = spec.loosened(float(section['composed_rel_tol']))
        return spec
    except DomainError as e:
        raise ConfigError(f"quadrature: {e}") from e


def grid_spec(section: Mapping[str, Any]) -> GridSpec:
    return GridSpec(float(section['t_min']), float(section['t_max']), int(section['points']))


def probe_radii(section: Mapping[str, Any]) -> Tuple[float, ...]:
    low, high = float(section['probe_min']), float(section['probe_max'])
    count = int(section['probe_points'])
    if not 0 < low <= high or count < 1:
        raise ConfigError(f"grid: need 0 < probe_min <= probe_max and probe_points >= 1, "
                          f"got [{low}, {high}] x {count}")
    return tuple(np.geomspace(low, high, count).tolist())


# kind -> (constructor, default parameters or None when one is required)
_PROFILE_KINDS = {
    'gaussian': (RadialProfile.gaussian, (1.0,)),
    'power-law': (RadialProfile.power_law, None),
    'generalized-cauchy': (RadialProfile.generalized_cauchy, None),
    'log-tempered-power': (RadialProfile.log_tempered_power, None),
    'constant': (RadialProfile.constant, (1.0,)),
    'zero': (lambda: RadialProfile.zero(), ()),
}


def parse_profile(text: str) -> RadialProfile:
    """'gaussian', 'gaussian:2', 'power-law:2', 'generalized-cauchy:3', 'zero',
    'grid:path/to/file.csv', ...

    Raises:
        ConfigError: unknown kind or bad parameters
    """
    kind, _, argument = str(text).strip().partition(':')
    if kind == 'grid':
        if not argument:
            raise ConfigError("grid profile needs a file: grid:<path>")
        if not os.path.exists(argument):
            raise ConfigError(f"grid file not found: {argument}")
        return read_grid_csv(argument)
    if kind not in _PROFILE_KINDS:
        raise ConfigError(f"unknown profile kind {kind!r}; known: grid, "
                          f"{', '.join(sorted(_PROFILE_KINDS))}")
    constructor, defaults = _PROFILE_KINDS[kind]
    try:
        params = tuple(float(x) for x in argument.split(',')) if argument else defaults
    except ValueError:
        raise ConfigError(f"profile parameters must be numbers, got {argument!r}") from None
    if params is None:
        raise ConfigError(f"profile {kind!r} needs a parameter, e.g. {kind}:2")
    try:
        return constructor(*params)
    except (DomainError, TypeError) as e:
        raise ConfigError(f"profile {text!r}: {e}") from e


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one CLI invocation needs, resolved from all sources."""
    command: str
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    l: Optional[int] = None
    profile: str = 'gaussian'
    operation: Optional[str] = None
    side: str = 'forward'
    alpha: Optional[float] = None
    beta: Optional[float] = None
    lam: Optional[float] = None
    dim: Optional[int] = None
    backend: str = 'ek-factorized'
    name: Optional[str] = None
    at: Optional[Tuple[float, ...]] = None
    suite: Optional[str] = None
    vary: Optional[str] = None
    values: Optional[Tuple[float, ...]] = None
    output: Optional[str] = None
    format: str = 'json'
    record: bool = False
    limit: int = 10
    settings: Dict[str, Dict[str, Any]] = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    def __post_init__(self):
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got {self.format!r}")
        if self.side not in ('forward', 'dual'):
            raise ConfigError(f"side must be 'forward' or 'dual', got {self.side!r}")

    @classmethod
    def resolve(cls, command: str, flags: Mapping[str, Any],
                config_path: Optional[str] = None,
                explicit_config: bool = False) -> 'ExperimentConfig':
        """Merge defaults, the config file, the environment and the flags.

        ``flags`` holds subcommand parameters; None means "not given".
        """
        file_layer = load_config_file(config_path, explicit_config)
        flag_layer = {
            'monte_carlo': {'samples': flags.get('samples'), 'seed': flags.get('seed'),
                            'streams': flags.get('streams'), 'workers': flags.get('threads')},
            'output': {'format': flags.get('format')},
            'logging': {'level': flags.get('log_level')},
            'storage': {'enabled': True if flags.get('record') else None},
        }
        settings = merge_settings(file_layer, environment_layer(), flag_layer)
        at = flags.get('at')
        values = flags.get('values')
        params = {key: flags.get(key) for key in (
            'n', 'p', 'q', 'l', 'operation', 'alpha', 'beta', 'lam', 'dim', 'name', 'suite',
            'vary', 'output')}
        directory = settings['output'].get('directory')
        # bare file names land in output.directory
        if params['output'] and directory and not os.path.dirname(params['output']):
            params['output'] = os.path.join(directory, params['output'])
        config = cls(command=command,
                     profile=flags.get('profile') or 'gaussian',
                     side=flags.get('side') or 'forward',
                     backend=flags.get('backend') or 'ek-factorized',
                     at=tuple(float(x) for x in at) if at else None,
                     values=tuple(float(x) for x in values) if values else None,
                     format=settings['output']['format'],
                     record=bool(settings['storage']['enabled']),
                     limit=int(flags.get('limit') or 10),
                     settings=settings, **params)
        config.validate()
        return config

    def validate(self):
        """Check every section before anything runs.

        Raises:
            ConfigError: naming the offending key or constraint
        """
        quadrature_spec(self.settings['quadrature'], composed=True)
        grid_spec(self.settings['grid'])
        probe_radii(self.settings['grid'])
        mc = self.settings['monte_carlo']
        if int(mc['samples']) < 2:
            raise ConfigError(f"monte_carlo.samples must be at least 2, got {mc['samples']}")
        if int(mc['streams']) < 1:
            raise ConfigError(f"monte_carlo.streams must be positive, got {mc['streams']}")
        for key, value in self.settings['tolerances'].items():
            if not float(value) > 0:
                raise ConfigError(f"tolerances.{key} must be positive, got {value}")
        if self.at is not None and any(not r >= 0 for r in self.at):
            raise ConfigError("--at radii must be nonnegative")

    # resolved views

    @property
    def has_dimensions(self) -> bool:
        return None not in (self.n, self.p, self.q, self.l)

    def grassmann(self) -> GrassmannConfig:
        """The (n, p, q, l) configuration.

        Raises:
            ConfigError: dimensions missing
            DomainError: dimensions violate the configuration constraints
        """
        if not self.has_dimensions:
            raise ConfigError(f"'{self.command}' needs --n, --p, --q and --l")
        return GrassmannConfig.create(self.n, self.p, self.q, self.l)

    def radial_profile(self) -> RadialProfile:
        return parse_profile(self.profile)

    @property
    def quadrature(self) -> QuadratureSpec:
        return quadrature_spec(self.settings['quadrature'])

    @property
    def composed_quadrature(self) -> QuadratureSpec:
        return quadrature_spec(self.settings['quadrature'], composed=True)

    @property
    def grid(self) -> GridSpec:
        return grid_spec(self.settings['grid'])

    @property
    def probes(self) -> Tuple[float, ...]:
        return probe_radii(self.settings['grid'])

    @property
    def radii(self) -> Tuple[float, ...]:
        return self.at if self.at else self.probes

    @property
    def tolerances(self) -> Dict[str, float]:
        return {key: float(value) for key, value in self.settings['tolerances'].items()}

    @property
    def samples(self) -> int:
        return int(self.settings['monte_carlo']['samples'])

    @property
    def seed(self) -> Optional[int]:
        seed = self.settings['monte_carlo']['seed']
        return None if seed is None else int(seed)

    @property
    def streams(self) -> int:
        return int(self.settings['monte_carlo']['streams'])

    @property
    def workers(self) -> Optional[int]:
        workers = self.settings['monte_carlo']['workers']
        return None if workers is None else int(workers)

    @property
    def log_level(self) -> str:
        return str(self.settings['logging']['level']).upper()

    @property
    def store_path(self) -> str:
        return str(self.settings['storage']['path'])

    def check_settings(self) -> CheckSettings:
        return CheckSettings(spec=self.quadrature, grid=self.grid, probes=self.probes,
                             workers=self.workers, tolerances=self.tolerances)

    def as_dict(self) -> Dict[str, Any]:
        """Full resolved configuration, as written into output headers."""
        params = {key: getattr(self, key) for key in (
            'command', 'n', 'p', 'q', 'l', 'profile', 'operation', 'side', 'alpha', 'beta',
            'lam', 'dim', 'backend', 'name', 'suite', 'vary', 'format', 'limit')}
        params['at'] = list(self.at) if self.at else None
        params['values'] = list(self.values) if self.values else None
        params['settings'] = copy.deepcopy(self.settings)
        return params
