"""
Which-path information, visibilities, complementarity and classicality witnesses.

Every quantity is a ratio of moments. A ratio whose normalization is below
the undefined threshold, taken relative to the intensity scale of the record
(intensity_scale(record) ** degree), is reported as a marker rather than raised:
UNDEFINED (NaN) for 0/0 and INFINITE (+inf) for a positive numerator over a
vanishing denominator. The |1,1> input at second order is the standard case:
D is undefined and V diverges, which reads as the asymptotic limit of
inputs approaching it.
"""
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import config as cfg
from correlation_engine import (
    ConsistencyException,
    IncompleteRecordException,
    check_split,
    hom_probabilities,
)
from helper_utils import format_value

UNDEFINED = math.nan
INFINITE = math.inf


def is_undefined(value):
    return isinstance(value, float) and math.isnan(value)


def is_infinite(value):
    return isinstance(value, float) and math.isinf(value)


def _is_defined(value):
    return not is_undefined(value)


@dataclass(frozen=True)
class Tolerance(object):
    """Violation margin and the normalization below which ratios become markers."""

    violation_epsilon: float = cfg.VIOLATION_EPSILON
    undefined_threshold: float = cfg.UNDEFINED_THRESHOLD

    def __post_init__(self):
        for name in ('violation_epsilon', 'undefined_threshold'):
            value = float(getattr(self, name))
            if not value > 0.0:
                raise ValueError('{name} must be positive, got {val}.'.format(name=name, val=value))
            object.__setattr__(self, name, value)


DEFAULT_TOLERANCE = Tolerance()


def intensity_scale(record):
    """
    Mean intensity (G(1)_AA + G(1)_BB) / 2 of a record, 1 when it lacks G(1).

    :param record: CorrelationRecord
    :return: float
    """
    try:
        return (record.G1_AA + record.G1_BB) / 2.0
    except IncompleteRecordException:
        return 1.0


def _floor(record, degree, tolerance):
    """Undefined threshold for a moment of the given degree in the intensities."""
    return tolerance.undefined_threshold * intensity_scale(record) ** degree


def _ratio(numerator, denominator, floor):
    if denominator <= floor:
        return INFINITE if numerator > floor else UNDEFINED
    return numerator / denominator


def which_path(record, n, tolerance=DEFAULT_TOLERANCE):
    """
    D_n = |G(n)_AA - G(n)_BB| / (G(n)_AA + G(n)_BB).

    :param record: CorrelationRecord
    :param n: int
    :param tolerance: Tolerance
    :return: float
        In [0, 1], or UNDEFINED.
    """
    g_aa = record.g_aa(n)
    g_bb = record.g_bb(n)
    return _ratio(abs(g_aa - g_bb), g_aa + g_bb, _floor(record, n, tolerance))


def visibility_phase(record, n, tolerance=DEFAULT_TOLERANCE):
    """
    V_n(ph) = 2|G'(n)_AB| / (G(n)_AA + G(n)_BB).

    :param record: CorrelationRecord
    :param n: int
    :param tolerance: Tolerance
    :return: float
    """
    return _ratio(2.0 * abs(record.g_phase(n)), record.g_aa(n) + record.g_bb(n), _floor(record, n, tolerance))


def which_path_nk(record, n, k, tolerance=DEFAULT_TOLERANCE):
    """D_n,k = |G(2k)_AA - G(2(n-k))_BB| / (G(2k)_AA + G(2(n-k))_BB)."""
    k = check_split(n, k)
    g_aa = record.g_aa(2 * k)
    g_bb = record.g_bb(2 * (n - k))
    return _ratio(abs(g_aa - g_bb), g_aa + g_bb, _floor(record, n, tolerance))


def visibility_intensity_nk(record, n, k, tolerance=DEFAULT_TOLERANCE):
    """
    V_n,k = 2 G(n)_k,AB / (G(2k)_AA + G(2(n-k))_BB).

    :param record: CorrelationRecord
    :param n: int
    :param k: int
    :param tolerance: Tolerance
    :return: float
        Nonnegative, possibly above one, or a marker.
    """
    k = check_split(n, k)
    return _ratio(2.0 * record.g_intensity(n, k), record.g_aa(2 * k) + record.g_bb(2 * (n - k)),
                  _floor(record, n, tolerance))


def visibility_intensity(record, tolerance=DEFAULT_TOLERANCE):
    """V_2 = 2 G(2)_AB / (G(2)_AA + G(2)_BB), the HOM dip depth relative to the autos."""
    return visibility_intensity_nk(record, 2, 1, tolerance)


def _complementarity(d, v):
    if is_infinite(v):
        return INFINITE
    if not (_is_defined(d) and _is_defined(v)):
        return UNDEFINED
    return d * d + v * v


def _closed_form(cross_squared, g_aa, g_bb, floor):
    total = g_aa + g_bb
    if total <= floor:
        return UNDEFINED
    return 1.0 + 4.0 * (cross_squared - g_aa * g_bb) / total ** 2


def _form_residual(x, closed_form, name):
    if not (_is_defined(x) and _is_defined(closed_form)) or is_infinite(x):
        return UNDEFINED
    residual = abs(x - closed_form)
    if residual > cfg.CLOSED_FORM_TOLERANCE * max(1.0, abs(x)):
        raise ConsistencyException('{name} forms disagree: D^2 + V^2 = {x!r}, closed form {cf!r}.'.format(
                name=name, x=x, cf=closed_form))
    return residual


HomVisibility = namedtuple('HomVisibility', ['value', 'via_visibility', 'equivalence_applicable'])


def v_hom(record, tolerance=DEFAULT_TOLERANCE):
    """
    HOM visibility 1 - P_parallel / P_perp.

    Without phase correlation (G'(2)_AB = 0) it equals (1 + 1/V_2)^-1; both
    routes are computed and must agree.

    :param record: CorrelationRecord
    :param tolerance: Tolerance
    :return: HomVisibility
        value from the probabilities, via_visibility from V_2, and whether the
        equivalence applies.
    """
    probabilities = hom_probabilities(record)
    floor = _floor(record, 2, tolerance)
    if probabilities.perp <= floor:
        value = UNDEFINED
    else:
        value = 1.0 - probabilities.parallel / probabilities.perp
    v2 = visibility_intensity(record, tolerance)
    if is_infinite(v2):
        via_visibility = 1.0
    elif is_undefined(v2) or v2 == 0.0:
        via_visibility = UNDEFINED if is_undefined(v2) else 0.0
    else:
        via_visibility = 1.0 / (1.0 + 1.0 / v2)
    applicable = abs(record.g_phase(2)) <= floor
    if applicable and _is_defined(value) and _is_defined(via_visibility):
        if abs(value - via_visibility) > cfg.V_HOM_TOLERANCE:
            raise ConsistencyException('V_HOM routes disagree: {a!r} vs {b!r}.'.format(a=value, b=via_visibility))
    return HomVisibility(value, via_visibility, applicable)


@dataclass(frozen=True)
class WitnessVerdicts(object):
    """
    Signed margins of the two moment inequalities.

    phase_margin = G(n)_AA G(n)_BB - |G'(n)_AB|^2 holds for every state.
    cs_margin = G(2)_AA G(2)_BB - (G(2)_AB)^2 holds for classical light only.
    higher_order_margins[(m, k)] = G(2k)_AA G(2(m-k))_BB - (G(m)_k,AB)^2, the
    classical bound behind X_m,k <= 1.

    Margins carry the scale of the moments; verdicts compare them with
    violation_epsilon times the larger of the two products, so they do not.
    """

    n: int
    phase_margin: float
    phase_positive: Optional[bool]
    cs_margin: float
    cs_classical: Optional[bool]
    higher_order_margins: dict
    higher_order_verdicts: dict

    def margin_for(self, n, k):
        return self.higher_order_margins.get((n, k), UNDEFINED)

    def verdict_for(self, n, k):
        return self.higher_order_verdicts.get((n, k))


def _verdict(margin, bound, tolerance):
    if is_undefined(margin):
        return None
    return margin >= -tolerance.violation_epsilon * bound


def _optional(getter, *args):
    try:
        return getter(*args)
    except IncompleteRecordException:
        return UNDEFINED


def witness_suite(record, n, tolerance=DEFAULT_TOLERANCE):
    """
    Phase-positivity and Cauchy-Schwarz margins of a record.

    Margins the record cannot supply are UNDEFINED with a None verdict.

    :param record: CorrelationRecord
    :param n: int
        Order of the phase-positivity margin.
    :param tolerance: Tolerance
    :return: WitnessVerdicts
    """
    g_phase = _optional(record.g_phase, n)
    phase_margin = UNDEFINED
    phase_positive = None
    if _is_defined(g_phase):
        product = record.g_aa(n) * record.g_bb(n)
        phase_margin = product - abs(g_phase) ** 2
        phase_positive = _verdict(phase_margin, max(product, abs(g_phase) ** 2), tolerance)
    margins = {}
    verdicts = {}
    for m, k in sorted(record.intensity_cross):
        g_aa = _optional(record.g_aa, 2 * k)
        g_bb = _optional(record.g_bb, 2 * (m - k))
        if _is_defined(g_aa) and _is_defined(g_bb):
            cross_squared = record.g_intensity(m, k) ** 2
            margins[(m, k)] = g_aa * g_bb - cross_squared
            verdicts[(m, k)] = _verdict(margins[(m, k)], max(g_aa * g_bb, cross_squared), tolerance)
    return WitnessVerdicts(n, phase_margin, phase_positive, margins.get((2, 1), UNDEFINED), verdicts.get((2, 1)),
                           margins, verdicts)


@dataclass(frozen=True)
class DualityReport(object):
    """Duality quantities of one (n, k); k is None for the phase-based report."""

    n: int
    k: Optional[int]
    D: float
    V_phase: float
    V_intensity: float
    X_phase: float
    X_intensity: float
    V_HOM: float
    phase_margin: float
    phase_positive: Optional[bool]
    cs_margin: float
    cs_classical: Optional[bool]
    violated: bool
    closed_form_residual: float

    def to_keyvalue(self):
        """Insertion-ordered mapping in config.REPORT_COLUMNS order."""
        return {column: getattr(self, column) for column in cfg.REPORT_COLUMNS}

    def csv_row(self):
        """Formatted values in config.REPORT_COLUMNS order."""
        return [format_value(getattr(self, column)) for column in cfg.REPORT_COLUMNS]


def complementarity(record, n, k=None, tolerance=DEFAULT_TOLERANCE):
    """
    Assemble the duality report of order n.

    With k None the report is phase based: D = D_n, V_phase = V_n(ph). With
    a split k it is intensity based: D = D_n,k, V_intensity = V_n,k, and when
    2k = n (where D_n,k = D_n) the phase fields are filled as well. V_HOM is
    filled for n = 2. Each X is checked against its closed form
    1 + 4(cross^2 - G_AA G_BB) / (G_AA + G_BB)^2.

    :param record: CorrelationRecord
    :param n: int
    :param k: int
    :param tolerance: Tolerance
    :return: DualityReport
    """
    residuals = []
    v_phase = x_phase = v_intensity = x_intensity = UNDEFINED
    if k is not None:
        k = check_split(n, k)
        d = which_path_nk(record, n, k, tolerance)
        v_intensity = visibility_intensity_nk(record, n, k, tolerance)
        x_intensity = _complementarity(d, v_intensity)
        g_aa = record.g_aa(2 * k)
        g_bb = record.g_bb(2 * (n - k))
        residuals.append(_form_residual(x_intensity, _closed_form(record.g_intensity(n, k) ** 2, g_aa, g_bb,
                                                                  _floor(record, n, tolerance)), 'X_intensity'))
    else:
        d = which_path(record, n, tolerance)
    if k is None or 2 * k == n:
        g_phase = _optional(record.g_phase, n)
        if _is_defined(g_phase):
            v_phase = visibility_phase(record, n, tolerance)
            x_phase = _complementarity(d, v_phase)
            closed_form = _closed_form(abs(g_phase) ** 2, record.g_aa(n), record.g_bb(n), _floor(record, n, tolerance))
            residuals.append(_form_residual(x_phase, closed_form, 'X_phase'))
    hom = UNDEFINED
    if n == 2 and k in (None, 1):
        try:
            hom = v_hom(record, tolerance).value
        except IncompleteRecordException:
            hom = UNDEFINED
    witnesses = witness_suite(record, n, tolerance)
    if k is None:
        cs_margin, cs_classical = witnesses.cs_margin, witnesses.cs_classical
    else:
        cs_margin, cs_classical = witnesses.margin_for(n, k), witnesses.verdict_for(n, k)
    defined = [residual for residual in residuals if _is_defined(residual)]
    return DualityReport(
            n=n,
            k=k,
            D=d,
            V_phase=v_phase,
            V_intensity=v_intensity,
            X_phase=x_phase,
            X_intensity=x_intensity,
            V_HOM=hom,
            phase_margin=witnesses.phase_margin,
            phase_positive=witnesses.phase_positive,
            cs_margin=cs_margin,
            cs_classical=cs_classical,
            violated=_is_defined(x_intensity) and x_intensity > 1.0 + tolerance.violation_epsilon,
            closed_form_residual=max(defined) if defined else UNDEFINED)
