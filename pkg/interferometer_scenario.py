"""HOM dip and first-order fringe scans simulated on input states."""
import math

import config as cfg
from correlation_engine import (
    fringe_probabilities,
    fringe_visibility_fit,
    hom_coincidence,
    hom_probabilities,
    record_from_state,
)
from duality_metrics import is_undefined, visibility_phase
from fock_core import mean_photon_number
from helper_utils import GridSpec, evaluate_grid
from scenario import SCENARIOS, Scenario, ScenarioConfigException, ScenarioResult


@SCENARIOS('hom-dip')
class HomDip(Scenario):
    """
    Coincidence behind the HBS against the distinguishability angle chi.

    The end points are checked against P_parallel (chi = 0) and P_perp
    (chi = pi/2) computed from the input record.
    """

    description = "HOM coincidence against the distinguishability angle chi in [0, pi/2]."
    columns = cfg.HOM_DIP_COLUMNS
    options = {
        'input_a': (str, cfg.DEFAULT_HOM_INPUTS[0], "StateSpec of input A."),
        'input_b': (str, cfg.DEFAULT_HOM_INPUTS[1], "StateSpec of input B."),
    }
    default_points = cfg.DEFAULT_HOM_DIP_POINTS
    default_spacing = 'linear'

    def references(self, state):
        """(P_parallel, P_perp) of a state."""
        return hom_probabilities(record_from_state(state, 2))

    def run(self):
        if self.config.is_log:
            raise ScenarioConfigException("The chi grid starts at 0 and cannot be log spaced.")
        state = self.input_state()
        parallel, perp = self.references(state)
        chis = GridSpec(0.0, math.pi / 2.0, self.config.points, is_log=False).values()
        coincidences = evaluate_grid(lambda chi: hom_coincidence(state, chi), chis, self.config.workers)
        rows = [(chi, coincidence, parallel, perp) for chi, coincidence in zip(chis, coincidences)]

        def evaluate(cutoff, chi):
            doubled = self.input_state(cutoff)
            return (hom_coincidence(doubled, chi),) + tuple(self.references(doubled))

        self.check_cutoff_drift(evaluate, (chis[0], chis[-1]))
        failures = []
        for label, value, expected in (('chi = 0', coincidences[0], parallel),
                                       ('chi = pi/2', coincidences[-1], perp)):
            if abs(value - expected) > cfg.CHECK_TOLERANCE:
                failures.append("Coincidence at {label} is {val!r}, expected {exp!r}.".format(
                        label=label, val=value, exp=expected))
        return ScenarioResult(self.columns, rows, failures)


@SCENARIOS('fringe-scan')
class FringeScan(Scenario):
    """
    First-order fringe: mean counts behind the HBS against a phase on mode B.

    Checks energy conservation P_C + P_D = <N_A> + <N_B> on every row and the
    fitted fringe visibility against V_1(ph) of the inputs, unless V_1 is
    undefined (both inputs dark).
    """

    description = "Mean counts P_C, P_D behind the HBS against a phase theta on mode B."
    columns = cfg.FRINGE_SCAN_COLUMNS
    options = {
        'input_a': (str, cfg.DEFAULT_FRINGE_INPUTS[0], "StateSpec of input A."),
        'input_b': (str, cfg.DEFAULT_FRINGE_INPUTS[1], "StateSpec of input B."),
        'grid_min': (float, 0.0, "Smallest phase theta."),
        'grid_max': (float, cfg.DEFAULT_FRINGE_MAX, "Largest phase theta."),
    }
    default_cutoff = cfg.DEFAULT_FRINGE_CUTOFF
    default_points = cfg.DEFAULT_FRINGE_POINTS
    default_spacing = 'linear'

    def run(self):
        state = self.input_state()
        thetas = self.config.grid.values()
        counts = evaluate_grid(lambda theta: fringe_probabilities(state, theta), thetas, self.config.workers)
        rows = [(theta, p_c, p_d) for theta, (p_c, p_d) in zip(thetas, counts)]
        self.check_cutoff_drift(lambda cutoff, theta: fringe_probabilities(self.input_state(cutoff), theta),
                                (thetas[0], thetas[-1]))
        failures = []
        total = mean_photon_number(state, 0) + mean_photon_number(state, 1)
        for theta, p_c, p_d in rows:
            if abs(p_c + p_d - total) > cfg.CHECK_TOLERANCE * max(1.0, total):
                failures.append("P_C + P_D = {sum!r} at theta = {theta!r}, expected {tot!r}.".format(
                        sum=p_c + p_d, theta=theta, tot=total))
        expected = visibility_phase(record_from_state(state, 1), 1)
        # No light, no fringe to fit.
        if len(rows) >= 3 and not is_undefined(expected):
            fit = fringe_visibility_fit(thetas, [p_c for _, p_c, _ in rows])
            if abs(fit.visibility - expected) > cfg.FRINGE_FIT_TOLERANCE:
                failures.append("Fitted fringe visibility {fit!r} differs from V_1 = {exp!r}.".format(
                        fit=fit.visibility, exp=expected))
        return ScenarioResult(self.columns, rows, failures)
