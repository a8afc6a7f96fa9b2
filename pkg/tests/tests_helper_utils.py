"""Unit tests for helper_utils."""
import math

import numpy as np
import pytest
from mock import patch

import config as cfg
import helper_utils as helper


@pytest.mark.positive
@pytest.mark.parametrize('minimum, maximum, points, is_log', [
    (1e-2, 1e2, 201, True),
    (0.3, 7.0, 9, True),
    (0.0, 1.0, 5, False),
])
def test_grid_values(minimum, maximum, points, is_log):
    """
    Unit test for 'GridSpec.values'.

    :return: None
    """
    values = helper.GridSpec(minimum, maximum, points, is_log).values()
    assert (len(values) == points)
    assert (values[0] == minimum and values[-1] == maximum)
    assert (np.all(np.diff(values) > 0.0))


@pytest.mark.positive
def test_log_grid_is_geometric():
    """
    Unit test for the spacing of a log grid.

    :return: None
    """
    values = helper.GridSpec(1.0, 100.0, 3).values()
    assert (math.isclose(values[1], 10.0))
    assert (list(helper.GridSpec(0.0, 1.0, 3, is_log=False).values()) == [0.0, 0.5, 1.0])


@pytest.mark.negative
@pytest.mark.parametrize('minimum, maximum, points, is_log', [
    (1.0, 2.0, 1, True),
    (2.0, 1.0, 5, False),
    (0.0, 1.0, 5, True),
    (-1.0, 1.0, 5, True),
    (1.0, float('inf'), 5, False),
    (1.0, 2.0, 2.5, False),
])
def test_grid_validation(minimum, maximum, points, is_log):
    """
    Unit test for the GridSpec invariants.

    :return: None
    """
    with pytest.raises(helper.GridException):
        helper.GridSpec(minimum, maximum, points, is_log)


@pytest.mark.positive
def test_read_config_file(tmp_path):
    """
    Unit test for 'read_config_file'.

    :return: None
    """
    config_file = tmp_path / 'scenario.ini'
    config_file.write_text('[{sec}]\npoints = 11\ninput_a = fock(1)\n\n[extra]\npoints = 3\n'.format(
            sec=cfg.CONFIG_SECTION))
    assert (helper.read_config_file(str(config_file)) == {'points': '11', 'input_a': 'fock(1)'})
    assert (helper.read_config_file(str(config_file), section='extra') == {'points': '3'})


@pytest.mark.negative
def test_read_config_file_errors(tmp_path):
    """
    Unit test for 'read_config_file' with a missing file, section or header.

    :return: None
    """
    with pytest.raises(helper.ConfigFileException):
        helper.read_config_file(str(tmp_path / 'missing.ini'))
    config_file = tmp_path / 'other.ini'
    config_file.write_text('[other]\npoints = 3\n')
    with pytest.raises(helper.ConfigFileException):
        helper.read_config_file(str(config_file))
    config_file.write_text('points = 3\n')
    with pytest.raises(helper.ConfigFileException):
        helper.read_config_file(str(config_file))


@pytest.mark.positive
def test_merge_options():
    """
    Unit test for 'merge_options': set flags win, unset flags do not.

    :return: None
    """
    merged = helper.merge_options({'points': '11', 'cutoff': '6'}, {'points': 21, 'cutoff': None, 'seed': 4})
    assert (merged == {'points': 21, 'cutoff': '6', 'seed': 4})


@pytest.mark.positive
@pytest.mark.parametrize('value, text', [
    (0.6, '0.6'),
    (-0.0, '0'),
    (1.0 / 3.0, '0.333333333333'),
    (float('nan'), 'nan'),
    (float('inf'), 'inf'),
    (np.float64(2.5), '2.5'),
    (True, 'true'),
    (np.bool_(False), 'false'),
    (None, 'nan'),
    (3, '3'),
    (np.int64(7), '7'),
    ('parametric', 'parametric'),
])
def test_format_value(value, text):
    """
    Unit test for 'format_value'.

    :return: None
    """
    assert (helper.format_value(value) == text)


@pytest.mark.positive
def test_format_table():
    """
    Unit test for 'format_table' in both output formats.

    :return: None
    """
    columns = ('zeta', 'D2', 'violated')
    rows = [(1.0, 0.6, False), (2.0, -0.0, True)]
    assert (helper.format_table(columns, rows) == 'zeta,D2,violated\n1,0.6,false\n2,0,true\n')
    assert (helper.format_table(columns, rows, helper.KEYVALUE_FORMAT) ==
            'zeta=1 D2=0.6 violated=false\nzeta=2 D2=0 violated=true\n')
    assert (helper.format_table(columns, []) == 'zeta,D2,violated\n')


@pytest.mark.negative
def test_format_table_unknown_format():
    """
    Unit test for 'format_table' with an unknown format.

    :return: None
    """
    with pytest.raises(ValueError):
        helper.format_table(('a',), [(1,)], 'json')


@pytest.mark.positive
def test_write_output(tmp_path, capsys):
    """
    Unit test for 'write_output' to a file and to stdout.

    :return: None
    """
    target = tmp_path / 'out.csv'
    helper.write_output('a,b\n1,2\n', str(target))
    with open(str(target), 'rb') as output_file:
        assert (output_file.read() == b'a,b\n1,2\n')
    helper.write_output('a=1\n')
    assert (capsys.readouterr().out == 'a=1\n')


@pytest.mark.positive
@pytest.mark.parametrize('workers', [None, 1, 4])
def test_evaluate_grid_order(workers):
    """
    Unit test for 'evaluate_grid' keeping grid order.

    :return: None
    """
    points = list(range(50))
    assert (helper.evaluate_grid(lambda x: x * x, points, workers) == [x * x for x in points])


@pytest.mark.positive
@patch('helper_utils.ThreadPoolExecutor')
def test_evaluate_grid_sequential_without_workers(mock_executor):
    """
    Unit test for 'evaluate_grid' not starting a pool for one worker.

    :param mock_executor: MANDATORY mock object @n
    :return: None
    """
    assert (helper.evaluate_grid(abs, [-1, 2], workers=1) == [1, 2])
    assert (not mock_executor.called)


@pytest.mark.positive
def test_report(capsys):
    """
    Unit test for 'report' on stderr.

    :return: None
    """
    helper.report('all checks passed')
    helper.report('example2.D2 failed', is_ok=False)
    captured = capsys.readouterr()
    assert (captured.out == '')
    lines = captured.err.splitlines()
    assert (lines[0] == '{mark} all checks passed'.format(mark=cfg.OKAY_MSG))
    assert (lines[1] == '{mark} example2.D2 failed'.format(mark=cfg.ERROR_MSG))


@pytest.mark.positive
def test_write_output_is_utf8(tmp_path):
    """
    Unit test for 'write_output' writing UTF-8 whatever the locale.

    :return: None
    """
    target = tmp_path / 'marks.txt'
    text = 'check,mark\nexample2.D2,✔\nchi,π/2\n'
    helper.write_output(text, str(target))
    assert (target.read_bytes() == text.encode('utf-8'))
