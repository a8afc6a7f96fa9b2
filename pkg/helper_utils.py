"""Module with various utility functions for the scenarios."""
import configparser
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from config import (
    CONFIG_SECTION,
    ERROR_MSG,
    FLOAT_FORMAT,
    OKAY_MSG,
)

CSV_FORMAT = 'csv'
KEYVALUE_FORMAT = 'kv'
OUTPUT_FORMATS = (CSV_FORMAT, KEYVALUE_FORMAT)


class GridException(Exception):
    """The malformed grid exception class."""


class ConfigFileException(Exception):
    """The unreadable scenario configuration file exception class."""


@dataclass(frozen=True)
class GridSpec(object):
    """
    Parameter grid given as bounds, number of points and spacing.

    Invariants: at least two points, finite bounds with minimum < maximum,
    positive bounds for log spacing.
    """

    minimum: float
    maximum: float
    points: int
    is_log: bool = True

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 2:
            raise GridException("A grid needs at least 2 points, got {num}.".format(num=self.points))
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)) or self.minimum >= self.maximum:
            raise GridException("Grid bounds [{lo}, {hi}] are not an increasing finite range.".format(
                    lo=self.minimum, hi=self.maximum))
        if self.is_log and self.minimum <= 0.0:
            raise GridException("A log-spaced grid needs positive bounds, got [{lo}, {hi}].".format(
                    lo=self.minimum, hi=self.maximum))
        object.__setattr__(self, 'points', int(self.points))

    def values(self):
        """
        Get the grid points in increasing order.

        :return: numpy.ndarray
        """
        if self.is_log:
            grid = np.logspace(math.log10(self.minimum), math.log10(self.maximum), self.points)
        else:
            grid = np.linspace(self.minimum, self.maximum, self.points)
        # Pin the end points so they do not pick up rounding from the exponentiation.
        grid[0], grid[-1] = self.minimum, self.maximum
        return grid


def read_config_file(file_name, section=None):
    """
    Read the scenario section of an INI configuration file.

    :param file_name: str
        Path of the configuration file.
    :param section: str
        Section to read, defaults to config.CONFIG_SECTION.
    :return: dict
        Raw string values keyed by option name.
    """
    if section is None:
        section = CONFIG_SECTION
    if not os.path.isfile(file_name):
        raise ConfigFileException("The config file, {file}, does not exist!".format(file=file_name))
    parser = configparser.ConfigParser()
    try:
        parser.read(file_name)
    except configparser.Error as err:
        raise ConfigFileException("Cannot parse {file}: {err}".format(file=file_name, err=err))
    if not parser.has_section(section):
        raise ConfigFileException("The config file, {file}, has no [{sec}] section.".format(
                file=file_name, sec=section))
    return dict(parser.items(section))


def merge_options(file_values, flag_values):
    """
    Merge configuration file values with command line flags; flags win.

    :param file_values: dict
    :param flag_values: dict
        Flags left unset are None and do not override.
    :return: dict
    """
    merged = dict(file_values)
    merged.update({key: value for key, value in flag_values.items() if value is not None})
    return merged


def format_value(value):
    """
    Format a table cell deterministically.

    Floats use config.FLOAT_FORMAT ('inf', 'nan' for markers), booleans are
    'true'/'false' and a missing verdict (None) is 'nan'.

    :param value: object
    :return: str
    """
    if value is None:
        return 'nan'
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # Adding zero turns -0.0 into 0.0.
        return FLOAT_FORMAT.format(float(value) + 0.0)
    return str(value)


def format_table(columns, rows, output_format=CSV_FORMAT):
    """
    Render rows as CSV (header row, LF line endings) or key-value lines.

    In the key-value form every row is one line of space separated
    column=value pairs.

    :param columns: sequence of str
    :param rows: sequence of sequence
    :param output_format: str
        'csv' or 'kv'.
    :return: str
    """
    if output_format not in OUTPUT_FORMATS:
        raise ValueError("Unknown output format '{fmt}'.".format(fmt=output_format))
    cells = [[format_value(value) for value in row] for row in rows]
    if output_format == KEYVALUE_FORMAT:
        return ''.join(' '.join('{key}={val}'.format(key=key, val=val) for key, val in zip(columns, row)) + '\n'
                       for row in cells)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows(cells)
    return buffer.getvalue()


def write_output(text, file_name=None):
    """
    Write rendered output to a file, or to stdout when no file is given.

    :param text: str
    :param file_name: str
    :return: None
    """
    if file_name is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(file_name, 'w', newline='', encoding='utf-8') as output_file:
        output_file.write(text)


def evaluate_grid(func, points, workers=None):
    """
    Evaluate a function over grid points, results in grid order.

    :param func: callable
    :param points: iterable
    :param workers: int
        Thread pool size; None or 1 evaluates sequentially.
    :return: list
    """
    points = list(points)
    if workers is None or workers <= 1:
        return [func(point) for point in points]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, points))


def report(message, is_ok=True):
    """
    Print a verdict line on stderr, prefixed with the check or cross mark.

    :param message: str
    :param is_ok: boolean
    :return: None
    """
    print("{mark} {msg}".format(mark=OKAY_MSG if is_ok else ERROR_MSG, msg=message), file=sys.stderr)
