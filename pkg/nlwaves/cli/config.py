# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..general import _pkg_root, NlwavesError
from ..kernels import KernelModel
from ..wavetrain import Nonlinearity

SCENARIO_DIR = _pkg_root / 'cli' / 'scenarios'
OUTPUT_ROOT_ENV = 'NLWAVES_OUTPUT_ROOT'
DEFAULT_OUTPUT_ROOT = 'nlwaves_output'

TASKS = ('symbol', 'roots', 'hyperbolicity', 'flow', 'index', 'oracle', 'weyl', 'wavetrain', 'manifold',
         'acceptance')
OPERATORS = ('steady_state', 'constant', 'front', 'principal_profile')
PROFILES = {
    'tanh_squared': lambda xi: np.tanh(xi)**2,
    'tanh': lambda xi: np.tanh(xi),
}


class ConfigError(ValueError, NlwavesError):
    pass


@dataclass
class Scenario:
    """A parsed and validated scenario config.

    The raw JSON record is kept in 'record' for the manifest; the built
    objects are constructed lazily by the task runners.
    """
    name: str
    task: str
    record: dict
    parameters: dict = field(default_factory=dict)
    output: str = None
    source: str = None

    @property
    def kernel(self):
        return _build(self.record, 'kernel', KernelModel.from_dict)

    @property
    def A(self):
        dimension = self.kernel.dimension if 'kernel' in self.record else None
        return _matrix(self.record.get('A', 1.), 'A', dimension)

    @property
    def nonlinearity(self):
        dimension = self.kernel.dimension if 'kernel' in self.record else 1
        return _build(self.record, 'nonlinearity', lambda spec: Nonlinearity.from_dict(spec, dimension))

    def param(self, key, default=None, *, kind=float, check=None, message=None):
        """Task parameter 'key', converted with 'kind' and validated by 'check'."""
        if key not in self.parameters:
            return default
        value = self.parameters[key]
        try:
            value = kind(value) if kind is not None else value
        except (TypeError, ValueError):
            raise ConfigError(f"parameters.{key}: cannot read {value!r} as {kind.__name__}.") from None
        if check is not None and not check(value):
            raise ConfigError(f"parameters.{key}: {message or 'invalid value'} (got {value!r}).")
        return value

    def validate(self):
        """Build every referenced spec once, so that errors surface before dispatch."""
        if 'kernel' in self.record:
            self.kernel, self.A
        if 'nonlinearity' in self.record:
            self.nonlinearity

    def output_dir(self, override=None):
        if override:
            return Path(override)
        if self.output:
            return Path(self.output)
        return Path(os.environ.get(OUTPUT_ROOT_ENV, DEFAULT_OUTPUT_ROOT)) / self.name

    def to_dict(self):
        return dict(self.record)


def _build(record, key, builder):
    if key not in record:
        raise ConfigError(f"{key}: missing, but the task needs it.")
    try:
        return builder(record[key])
    except (AttributeError, KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"{key}: {err}") from None


def _matrix(value, key, dimension=None):
    try:
        mat = np.atleast_2d(np.asarray(value, dtype=float))
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number or a square matrix, got {value!r}.") from None
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"{key}: expected a square matrix, got shape {mat.shape}.")
    if dimension is not None and mat.shape[0] != dimension:
        raise ConfigError(f"{key}: expected a {dimension}×{dimension} matrix to match the kernel, "
                        + f"got shape {mat.shape}.")
    return mat


def list_scenarios():
    return sorted(pp.stem for pp in SCENARIO_DIR.glob('*.json'))


def resolve(config):
    """Path of a config given as a file path or a bundled scenario name."""
    path = Path(config)
    if path.is_file():
        return path
    bundled = SCENARIO_DIR / f"{config}.json"
    if bundled.is_file():
        return bundled
    raise ConfigError(f"No config file {config!r} and no bundled scenario of that name "
                    + f"(available: {', '.join(list_scenarios())}).")


def parse_scenario(record, source=None):
    """Validate a config record and wrap it in a Scenario."""
    if not isinstance(record, dict):
        raise ConfigError(f"The config must be a JSON object, got {type(record).__name__}.")
    for key in ('name', 'task'):
        if not isinstance(record.get(key), str) or not record[key]:
            raise ConfigError(f"{key}: required string field is missing.")
    if record['task'] not in TASKS:
        raise ConfigError(f"task: unknown task {record['task']!r}; expected one of {', '.join(TASKS)}.")
    parameters = record.get('parameters', {})
    if not isinstance(parameters, dict):
        raise ConfigError("parameters: expected a JSON object.")
    operator = record.get('operator')
    if operator is not None:
        if not isinstance(operator, dict) or operator.get('type') not in OPERATORS:
            raise ConfigError(f"operator.type: expected one of {', '.join(OPERATORS)}.")
        if operator['type'] == 'principal_profile' and operator.get('profile') not in PROFILES:
            raise ConfigError(f"operator.profile: expected one of {', '.join(PROFILES)}.")
    scenario = Scenario(record['name'], record['task'], record, parameters, record.get('output'), source)
    scenario.validate()
    return scenario


def load_scenario(config):
    """Read and validate a scenario from a file path or bundled name.

    Raises:
        ConfigError: with the JSON line and column for syntax errors, or the
            offending field path.
    """
    path = resolve(config)
    try:
        record = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: line {err.lineno}, column {err.colno}: {err.msg}") from None
    return parse_scenario(record, str(path))
