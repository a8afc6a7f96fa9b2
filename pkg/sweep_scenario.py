"""Parametric sweeps of the second-order duality quantities over g2_auto and zeta."""
import math

import config as cfg
from correlation_engine import ParametricCorrelations, record_from_parameters
from duality_metrics import complementarity
from helper_utils import evaluate_grid
from scenario import SCENARIOS, Scenario, ScenarioResult


def second_order_row(parameters):
    """
    (D2, V2, sqrt_X2, violated) of a parametric description.

    :param parameters: ParametricCorrelations
    :return: tuple
    """
    report = complementarity(record_from_parameters(parameters), 2, 1)
    return report.D, report.V_intensity, math.sqrt(report.X_intensity), report.violated


@SCENARIOS('sweep-g2auto')
class SweepG2Auto(Scenario):
    """Sweep of a common autocorrelation g2_AA = g2_BB at fixed zeta and g2_AB."""

    description = "D2, V2 and sqrt(X2) against g2_auto (both autos equal)."
    columns = cfg.SWEEP_G2AUTO_COLUMNS
    options = {
        'zeta': (float, cfg.DEFAULT_SWEEP_ZETA, "Intensity ratio <N_A>/<N_B>."),
        'g2_ab': (float, cfg.DEFAULT_SWEEP_G2_AB, "Normalized cross correlation g2_AB."),
        'nbar_b': (float, cfg.DEFAULT_NBAR_B, "Mean photon number of mode B."),
        'grid_min': (float, cfg.DEFAULT_LOG_GRID_MIN, "Smallest g2_auto."),
        'grid_max': (float, cfg.DEFAULT_LOG_GRID_MAX, "Largest g2_auto."),
    }

    def row(self, g2_auto):
        """Table row at one g2_auto."""
        parameters = self.config.parameters
        return (g2_auto,) + second_order_row(ParametricCorrelations(
                g2_auto, g2_auto, parameters['g2_ab'], parameters['zeta'], parameters['nbar_b']))

    def run(self):
        rows = evaluate_grid(self.row, self.config.grid.values(), self.config.workers)
        return ScenarioResult(self.columns, rows, [])


@SCENARIOS('sweep-zeta')
class SweepZeta(Scenario):
    """Sweep of the intensity ratio zeta at fixed normalized correlations."""

    description = "D2, V2 and sqrt(X2) against the intensity ratio zeta."
    columns = cfg.SWEEP_ZETA_COLUMNS
    options = {
        'g2_aa': (float, cfg.DEFAULT_SWEEP_G2_AA, "Normalized autocorrelation of mode A."),
        'g2_bb': (float, cfg.DEFAULT_SWEEP_G2_BB, "Normalized autocorrelation of mode B."),
        'g2_ab': (float, cfg.DEFAULT_SWEEP_G2_AB, "Normalized cross correlation g2_AB."),
        'nbar_b': (float, cfg.DEFAULT_NBAR_B, "Mean photon number of mode B."),
        'grid_min': (float, cfg.DEFAULT_LOG_GRID_MIN, "Smallest zeta."),
        'grid_max': (float, cfg.DEFAULT_LOG_GRID_MAX, "Largest zeta."),
    }

    def row(self, zeta):
        """Table row at one zeta."""
        parameters = self.config.parameters
        return (zeta,) + second_order_row(ParametricCorrelations(
                parameters['g2_aa'], parameters['g2_bb'], parameters['g2_ab'], zeta, parameters['nbar_b']))

    def run(self):
        rows = evaluate_grid(self.row, self.config.grid.values(), self.config.workers)
        return ScenarioResult(self.columns, rows, [])
