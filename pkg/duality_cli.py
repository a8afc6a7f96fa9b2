"""
Command line front end of the duality simulator.

Usage: python duality_cli.py <scenario> [flags]

Exit codes: 0 success, 2 configuration error, 3 check failure.
"""
import argparse
import sys

import config as cfg
import interferometer_scenario  # noqa: F401
import paper_check_scenario  # noqa: F401
import state_run_scenario  # noqa: F401
import sweep_scenario  # noqa: F401
from correlation_engine import (
    ConsistencyException,
    IncompleteRecordException,
    InvalidRecordException,
    SplitIndexException,
    ZeroIntensityException,
)
from fock_core import (
    CutoffException,
    CutoffMismatchException,
    DimensionLimitException,
    InvalidStateException,
    ModeIndexException,
    NumericalToleranceException,
    SpaceMismatchException,
)
from helper_utils import (
    ConfigFileException,
    GridException,
    format_table,
    report,
    write_output,
)
from scenario import (
    SCENARIOS,
    CheckFailureException,
    CutoffAdequacyException,
    ScenarioConfig,
    ScenarioConfigException,
)
from state_factory import InvalidStateSpecException, StateSpecSyntaxException, TailMassException

CONFIG_ERRORS = (
    ScenarioConfigException,
    ConfigFileException,
    GridException,
    StateSpecSyntaxException,
    InvalidStateSpecException,
    TailMassException,
    InvalidRecordException,
    IncompleteRecordException,
    ZeroIntensityException,
    SplitIndexException,
    CutoffException,
    CutoffMismatchException,
    DimensionLimitException,
    ModeIndexException,
    SpaceMismatchException,
    InvalidStateException,
    OSError,
)
CHECK_ERRORS = (
    CheckFailureException,
    CutoffAdequacyException,
    ConsistencyException,
    NumericalToleranceException,
)


def build_parser():
    """
    Build the argument parser with one subcommand per registered scenario.

    :return: argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(description="Wave-particle duality in intensity interferometry.")
    subparsers = parser.add_subparsers(dest="scenario", metavar="scenario")
    subparsers.required = True
    for name in sorted(SCENARIOS):
        scenario_cls = SCENARIOS[name]
        subparser = subparsers.add_parser(name, help=scenario_cls.description, description=scenario_cls.description)
        scenario_cls.add_arguments(subparser)
    return parser


def run_scenario(name, flag_values):
    """
    Resolve the configuration, run a scenario and emit its table.

    :param name: str
        Registered subcommand name.
    :param flag_values: dict
        Parsed flags of the subcommand.
    :return: int
        Exit code.
    """
    scenario_cls = SCENARIOS[name]
    config = ScenarioConfig.resolve(scenario_cls, flag_values)
    result = scenario_cls(config).run()
    write_output(format_table(result.columns, result.rows, config.output_format), config.out)
    if result.failures:
        for message in result.failures:
            report(message, is_ok=False)
        raise CheckFailureException("{num} check(s) of {name} failed.".format(num=len(result.failures), name=name))
    report("{name}: {num} row(s) written.".format(name=name, num=len(result.rows)))
    return cfg.EXIT_OK


def main(argv=None):
    """Main function of the duality command line."""
    args = vars(build_parser().parse_args(argv))
    name = args.pop("scenario")
    try:
        return run_scenario(name, args)
    except CONFIG_ERRORS as err:
        report(str(err), is_ok=False)
        return cfg.EXIT_CONFIG_ERROR
    except CHECK_ERRORS as err:
        report(str(err), is_ok=False)
        return cfg.EXIT_CHECK_FAILURE


if __name__ == '__main__':
    sys.exit(main())
