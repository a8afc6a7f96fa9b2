"""Abstract class for all scenarios of the duality command line."""
from abc import ABCMeta, abstractmethod
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from six import add_metaclass

import config as cfg
from fock_core import build_space
from helper_utils import (
    CSV_FORMAT,
    OUTPUT_FORMATS,
    GridSpec,
    merge_options,
    read_config_file,
)
from state_factory import parse_state_spec, product_state


class ScenarioConfigException(Exception):
    """The invalid scenario configuration exception class."""


class CheckFailureException(Exception):
    """A scenario's built-in check failed."""


class CutoffAdequacyException(Exception):
    """A state-pathway result drifts when the cutoff is doubled."""


class RegisterDict(dict):
    """For registering the scenarios by subcommand name."""

    def __call__(self, name):
        """Making it simpler to use."""

        def class_wrapper(cls):
            """Class wrapper."""
            cls.name = name
            self[name] = cls
            return cls

        return class_wrapper


SCENARIOS = RegisterDict()

ScenarioResult = namedtuple('ScenarioResult', ['columns', 'rows', 'failures'])

# Option name -> (converter, help text) shared by every scenario.
COMMON_OPTIONS = {
    'out': (str, 'Write the table to this file instead of stdout.'),
    'format': (str, 'Output format: csv or kv.'),
    'cutoff': (int, 'Per-mode photon-number cutoff of state pathways.'),
    'points': (int, 'Number of grid points.'),
    'seed': (int, 'Seed of the classical-ensemble input.'),
    'workers': (int, 'Evaluate grid points in a pool of this many threads.'),
}


def _to_bool_spacing(value):
    value = str(value).strip().lower()
    if value not in ('log', 'linear'):
        raise ScenarioConfigException("Grid spacing must be 'log' or 'linear', got '{val}'.".format(val=value))
    return value == 'log'


@dataclass(frozen=True)
class ScenarioConfig(object):
    """
    Resolved configuration of one scenario run.

    Values come from the scenario defaults, then the [scenario] section of
    the configuration file, then the command line flags (flags win).
    """

    scenario: str
    parameters: Mapping[str, object] = field(default_factory=dict)
    inputs: Optional[Tuple[object, object]] = None
    out: Optional[str] = None
    output_format: str = CSV_FORMAT
    cutoff: int = cfg.DEFAULT_CUTOFF
    points: int = cfg.DEFAULT_SWEEP_POINTS
    is_log: bool = True
    seed: int = cfg.DEFAULT_SEED
    workers: Optional[int] = None

    @property
    def grid(self):
        """GridSpec over [grid_min, grid_max]."""
        return GridSpec(self.parameters['grid_min'], self.parameters['grid_max'], self.points, self.is_log)

    @classmethod
    def resolve(cls, scenario_cls, flag_values):
        """
        Build the configuration of a scenario from parsed flags.

        :param scenario_cls: class
            A registered Scenario subclass.
        :param flag_values: dict
            Parsed command line values; None means not given.
        :return: ScenarioConfig
        """
        flag_values = dict(flag_values)
        config_file = flag_values.pop('config', None)
        file_values = read_config_file(config_file) if config_file else {}
        named = file_values.pop('scenario', scenario_cls.name)
        if named != scenario_cls.name:
            raise ScenarioConfigException("The config file is for '{file}', not '{cmd}'.".format(
                    file=named, cmd=scenario_cls.name))
        values = merge_options(scenario_cls.defaults(), merge_options(file_values, flag_values))
        converters = dict((key, conv) for key, (conv, _) in COMMON_OPTIONS.items())
        converters.update((key, conv) for key, (conv, _, _) in scenario_cls.options.items())
        unknown = sorted(set(values) - set(converters) - {'spacing'})
        if unknown:
            raise ScenarioConfigException("Unknown option(s) for {name}: {keys}.".format(
                    name=scenario_cls.name, keys=', '.join(unknown)))
        try:
            values = {key: (converters[key](value) if key in converters and value is not None else value)
                      for key, value in values.items()}
        except ValueError as err:
            raise ScenarioConfigException("Invalid option value: {err}".format(err=err))
        if values['format'] not in OUTPUT_FORMATS:
            raise ScenarioConfigException("Output format must be one of {fmts}, got '{fmt}'.".format(
                    fmts=', '.join(OUTPUT_FORMATS), fmt=values['format']))
        if values['cutoff'] < 1:
            raise ScenarioConfigException("The cutoff must be positive, got {cut}.".format(cut=values['cutoff']))
        inputs = None
        if 'input_a' in values:
            inputs = (parse_state_spec(values.pop('input_a')), parse_state_spec(values.pop('input_b')))
        common = ('out', 'format', 'cutoff', 'points', 'spacing', 'seed', 'workers')
        return cls(scenario=scenario_cls.name,
                   parameters={key: value for key, value in values.items() if key not in common},
                   inputs=inputs,
                   out=values.get('out'),
                   output_format=values['format'],
                   cutoff=values['cutoff'],
                   points=values['points'],
                   is_log=_to_bool_spacing(values['spacing']),
                   seed=values['seed'],
                   workers=values.get('workers'))


def cutoff_drift(pairs):
    """
    Largest |base - doubled| over pairs of result sequences.

    Equal markers (inf and inf, nan and nan) do not drift.

    :param pairs: iterable of (sequence of float, sequence of float)
    :return: float
    """
    largest = 0.0
    for base, doubled in pairs:
        for left, right in zip(base, doubled):
            drift = abs(left - right)
            if drift == drift and drift > largest:
                largest = drift
    return largest


@add_metaclass(ABCMeta)
class Scenario(object):
    """Abstract class for all scenarios."""

    name = None
    description = None
    columns = ()
    # Scenario option name -> (converter, default, help text).
    options = {}
    default_cutoff = cfg.DEFAULT_CUTOFF
    default_points = cfg.DEFAULT_SWEEP_POINTS
    default_spacing = 'log'

    def __init__(self, scenario_config):
        """
        Initialization method.

        :param scenario_config: ScenarioConfig
        """
        self._config = scenario_config

    @property
    def config(self):
        return self._config

    @classmethod
    def defaults(cls):
        """Default option values of the scenario."""
        values = {'format': CSV_FORMAT, 'cutoff': cls.default_cutoff, 'points': cls.default_points,
                  'spacing': cls.default_spacing, 'seed': cfg.DEFAULT_SEED}
        values.update((key, default) for key, (_, default, _) in cls.options.items())
        return values

    @classmethod
    def add_arguments(cls, parser):
        """
        Add the common and the scenario specific flags to a parser.

        Every flag defaults to None so that unset flags do not override the
        configuration file.

        :param parser: argparse.ArgumentParser
        :return: argparse.ArgumentParser
        """
        parser.add_argument("--config",
                            metavar="file",
                            dest="config",
                            help="INI file with a [{sec}] section.".format(sec=cfg.CONFIG_SECTION))
        for key, (converter, help_text) in COMMON_OPTIONS.items():
            parser.add_argument("--" + key, dest=key, type=converter, default=None, help=help_text)
        spacing = parser.add_mutually_exclusive_group()
        spacing.add_argument("--log", dest="spacing", action="store_const", const="log",
                             help="Log-spaced grid.")
        spacing.add_argument("--linear", dest="spacing", action="store_const", const="linear",
                             help="Linearly spaced grid.")
        for key, (converter, _, help_text) in cls.options.items():
            parser.add_argument("--" + key.replace('_', '-'), dest=key, type=converter, default=None,
                                help=help_text)
        return parser

    def input_state(self, cutoff=None):
        """
        Product state of the two configured inputs.

        :param cutoff: int
            Defaults to the configured cutoff.
        :return: QuantumState
        """
        if self._config.inputs is None:
            raise ScenarioConfigException("Scenario {name} has no input states.".format(name=self.name))
        space = build_space(2, cutoff or self._config.cutoff)
        return product_state(self._config.inputs, space)

    def check_cutoff_drift(self, evaluate, points):
        """
        Re-evaluate points at doubled cutoff and fail on drift.

        :param evaluate: callable
            evaluate(cutoff, point) -> sequence of float.
        :param points: sequence
            Grid points to re-run, usually the first and the last.
        :return: float
            Largest drift seen.
        """
        cutoff = self._config.cutoff
        largest = cutoff_drift((evaluate(cutoff, point), evaluate(2 * cutoff, point)) for point in points)
        if largest > cfg.CUTOFF_DRIFT_TOLERANCE:
            raise CutoffAdequacyException(
                    "Results drift by {drift:.3e} when the cutoff is doubled from {cut}; increase --cutoff.".format(
                            drift=largest, cut=cutoff))
        return largest

    @abstractmethod
    def run(self):
        """
        Run the scenario.

        :return: ScenarioResult
        """
        raise NotImplementedError("Please implement this method as per your requirements.")
