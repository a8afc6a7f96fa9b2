"""Full state-pathway evaluation of one input pair up to order n."""
import config as cfg
from correlation_engine import multiport_coincidence, record_from_state
from duality_metrics import complementarity
from fock_core import build_space
from linear_optics import balanced_multiport, hbs_doubling_network
from scenario import SCENARIOS, Scenario, ScenarioConfigException, ScenarioResult
from state_factory import draw_classical_ensemble

INPUT_SOURCE = 'inputs'
RANDOM_CLASSICAL_SOURCE = 'random_classical'


def _report_rows(prefix, report):
    return [('{prefix}.{col}'.format(prefix=prefix, col=column), value)
            for column, value in report.to_keyvalue().items() if column not in ('n', 'k')]


def _numeric(rows):
    return [value for _, value in rows if isinstance(value, float)]


def state_run_rows(state, n):
    """
    Quantity/value rows of one state up to order n.

    Holds the correlation record, the phase report of every order 1..n, the
    intensity report of every (m, k) with 2 <= m <= n, and for n >= 2 the
    n-fold coincidence behind the balanced multiport and on the first
    detector of every HBS-doubled port.

    :param state: QuantumState
    :param n: int
    :return: list
    """
    record = record_from_state(state, n)
    rows = [('record.' + key, value) for key, value in record.to_keyvalue().items()]
    for m in range(1, n + 1):
        rows.extend(_report_rows('phase[n={m}]'.format(m=m), complementarity(record, m)))
    for m in range(2, n + 1):
        for k in range(1, m):
            rows.extend(_report_rows('intensity[n={m},k={k}]'.format(m=m, k=k), complementarity(record, m, k)))
    if n >= 2:
        rows.append(('multiport_coincidence', multiport_coincidence(state, balanced_multiport(n), range(n))))
        rows.append(('doubled_port_coincidence', multiport_coincidence(
                state, hbs_doubling_network(n), ['d{j}a'.format(j=j) for j in range(n)])))
    return rows


@SCENARIOS('state-run')
class StateRun(Scenario):
    """Record, duality reports and multiport coincidences of one input pair."""

    description = "Correlation record, duality reports and n-fold coincidences of an input pair."
    columns = cfg.STATE_RUN_COLUMNS
    options = {
        'input_a': (str, cfg.DEFAULT_HOM_INPUTS[0], "StateSpec of input A."),
        'input_b': (str, cfg.DEFAULT_HOM_INPUTS[1], "StateSpec of input B."),
        'order': (int, cfg.DEFAULT_STATE_RUN_ORDER, "Interference order n."),
        'source': (str, INPUT_SOURCE, "'inputs' for the StateSpec pair, 'random_classical' for a seeded "
                                      "classical mixture."),
    }

    def state(self, cutoff=None):
        """
        Input state at a cutoff, from the StateSpecs or the seeded ensemble.

        The ensemble is always drawn for the configured cutoff, so a doubled
        cutoff rebuilds the same mixture.
        """
        source = self.config.parameters['source']
        if source == INPUT_SOURCE:
            return self.input_state(cutoff)
        if source == RANDOM_CLASSICAL_SOURCE:
            ensemble = draw_classical_ensemble(self.config.seed, self.config.cutoff)
            return ensemble.state(build_space(2, cutoff or self.config.cutoff))
        raise ScenarioConfigException("Unknown source '{src}'.".format(src=source))

    def run(self):
        order = self.config.parameters['order']
        if order < 1:
            raise ScenarioConfigException("The order must be positive, got {n}.".format(n=order))
        rows = state_run_rows(self.state(), order)
        self.check_cutoff_drift(lambda cutoff, _: _numeric(state_run_rows(self.state(cutoff), order)), (None,))
        return ScenarioResult(self.columns, rows, [])
