"""Unit tests for correlation_engine."""
import math

import numpy as np
import pytest

import correlation_engine as engine
from fock_core import CutoffException, QuantumState, build_space, embed_state
from linear_optics import ModeUnitary, balanced_multiport, hbs
from state_factory import StateSpec, example2_pair, product_state, random_density_matrix

EXAMPLE2 = engine.ParametricCorrelations(0.8, 0.8, 1.0, 2.0, 0.5)


def _pair(spec_a, spec_b, cutoff=4):
    return product_state((spec_a, spec_b), build_space(2, cutoff))


def _fock_pair(n_a, n_b, cutoff=4):
    return _pair(StateSpec.fock(n_a), StateSpec.fock(n_b), cutoff)


@pytest.mark.positive
def test_record_from_parameters():
    """
    Unit test for 'record_from_parameters' on the worked example.

    :return: None
    """
    record = engine.record_from_parameters(EXAMPLE2)
    assert (record.order == 2)
    assert (math.isclose(record.G1_AA, 1.0) and math.isclose(record.G1_BB, 0.5))
    assert (math.isclose(record.g_aa(2), 0.8))
    assert (math.isclose(record.g_bb(2), 0.2))
    assert (math.isclose(record.g_intensity(2, 1), 0.5))
    assert (record.g_phase(2) == 0)


@pytest.mark.positive
def test_record_from_state_matches_parameters():
    """
    Unit test for 'record_from_state' on the example pair.

    :return: None
    """
    state_record = engine.record_from_state(example2_pair(build_space(2, 4)), 2)
    parametric = engine.record_from_parameters(EXAMPLE2)
    for m in (1, 2):
        assert (math.isclose(state_record.g_aa(m), parametric.g_aa(m)))
        assert (math.isclose(state_record.g_bb(m), parametric.g_bb(m)))
    assert (math.isclose(state_record.g_intensity(2, 1), parametric.g_intensity(2, 1)))
    assert (abs(state_record.g_phase(2)) < 1e-15)
    assert (sorted(state_record.auto_aa) == [1, 2, 3, 4])


@pytest.mark.negative
def test_record_from_state_needs_cutoff():
    """
    Unit test for 'record_from_state' with a cutoff below twice the order.

    :return: None
    """
    state = _fock_pair(1, 1, cutoff=3)
    with pytest.raises(CutoffException):
        engine.record_from_state(state, 2)
    record = engine.record_from_state(state, 2, phase_only=True)
    assert (not record.intensity_cross)
    with pytest.raises(engine.IncompleteRecordException):
        record.g_intensity(2, 1)


@pytest.mark.positive
def test_coherent_phase_cross():
    """
    Unit test for the phase cross correlation of coherent inputs.

    :return: None
    """
    record = engine.record_from_state(_pair(StateSpec.coherent(0.5), StateSpec.coherent(0.5j), 12), 2)
    assert (abs(record.g_phase(1) - 0.25j) < 1e-10)
    assert (abs(record.g_phase(2) - (0.25j) ** 2) < 1e-10)


@pytest.mark.negative
def test_record_invariants():
    """
    Unit test for the CorrelationRecord invariants.

    :return: None
    """
    with pytest.raises(engine.InvalidRecordException):
        engine.CorrelationRecord(2, {1: -0.5}, {1: 1.0})
    with pytest.raises(engine.InvalidRecordException):
        engine.CorrelationRecord(1, {1: 1.0}, {1: 1.0}, phase_cross={1: 1.5})
    with pytest.raises(engine.InvalidRecordException):
        engine.CorrelationRecord(0, {}, {})
    with pytest.raises(engine.InvalidRecordException):
        engine.ParametricCorrelations(0.8, 0.8, 1.0, 0.0)
    record = engine.CorrelationRecord(1, {1: 1.0}, {1: 1.0})
    with pytest.raises(TypeError):
        record.auto_aa[1] = 2.0


@pytest.mark.negative
@pytest.mark.parametrize('n, k', [(2, 0), (2, 2), (3, 3), (3, 1.5)])
def test_check_split(n, k):
    """
    Unit test for 'check_split' outside 1..n-1.

    :return: None
    """
    with pytest.raises(engine.SplitIndexException):
        engine.check_split(n, k)


@pytest.mark.positive
def test_record_keyvalue():
    """
    Unit test for 'CorrelationRecord.to_keyvalue'.

    :return: None
    """
    values = engine.record_from_parameters(EXAMPLE2).to_keyvalue()
    assert (list(values)[:4] == ['G1_AA', 'G2_AA', 'G1_BB', 'G2_BB'])
    assert (values['G2_AB'] == 0.5)
    assert ('G2p_AB_im' in values)
    record = engine.record_from_state(_fock_pair(1, 2, cutoff=6), 3)
    assert ('G3_1_AB' in record.to_keyvalue())


@pytest.mark.positive
def test_g2_functions():
    """
    Unit test for 'g2_auto' and 'g2_cross'.

    :return: None
    """
    state = _pair(StateSpec.thermal(0.2), StateSpec.fock(1), 30)
    assert (abs(engine.g2_auto(state, 0) - 2.0) < 1e-8)
    assert (engine.g2_auto(state, 1) == 0.0)
    assert (abs(engine.g2_cross(state) - 1.0) < 1e-8)
    with pytest.raises(engine.ZeroIntensityException):
        engine.g2_auto(_fock_pair(0, 1), 0)


@pytest.mark.positive
def test_intensity_cross_nk():
    """
    Unit test for 'intensity_cross_nk' on |1, 2>.

    :return: None
    """
    state = _fock_pair(1, 2, cutoff=2)
    assert (math.isclose(engine.intensity_cross_nk(state, 3, 1), 2.0))
    assert (engine.intensity_cross_nk(state, 3, 2) == 0.0)
    assert (math.isclose(engine.intensity_cross_nk(state, 2, 1), 2.0))


@pytest.mark.positive
def test_hom_probabilities():
    """
    Unit test for 'hom_probabilities' on the worked example and on |1, 1>.

    :return: None
    """
    parallel, perp = engine.hom_probabilities(engine.record_from_parameters(EXAMPLE2))
    assert (math.isclose(parallel, 0.25) and math.isclose(perp, 0.5))
    parallel, perp = engine.hom_probabilities(engine.record_from_state(_fock_pair(1, 1), 2))
    assert (abs(parallel) < 1e-12 and math.isclose(perp, 0.5))


@pytest.mark.negative
def test_hom_probabilities_consistency():
    """
    Unit test for 'hom_probabilities' with a record whose forms disagree.

    :return: None
    """
    record = engine.record_from_parameters(EXAMPLE2)
    with pytest.raises(engine.ConsistencyException):
        engine.hom_probabilities(record, tolerance=-1.0)


@pytest.mark.positive
@pytest.mark.parametrize('chi, expected', [(0.0, 0.0), (math.pi / 4.0, 0.25), (math.pi / 2.0, 0.5)])
def test_hom_coincidence_fock(chi, expected):
    """
    Unit test for 'hom_coincidence' on |1, 1>: 0.5 sin^2(chi).

    :return: None
    """
    assert (abs(engine.hom_coincidence(_fock_pair(1, 1), chi) - expected) < 1e-12)


@pytest.mark.positive
def test_hom_coincidence_matches_probabilities():
    """
    Unit test for 'hom_coincidence' at the end points against 'hom_probabilities'.

    :return: None
    """
    state = example2_pair(build_space(2, 4))
    parallel, perp = engine.hom_probabilities(engine.record_from_state(state, 2))
    assert (abs(engine.hom_coincidence(state, 0.0) - parallel) < 1e-12)
    assert (abs(engine.hom_coincidence(state, math.pi / 2.0) - perp) < 1e-12)


@pytest.mark.positive
def test_multiport_coincidence():
    """
    Unit test for 'multiport_coincidence'.

    :return: None
    """
    state = _fock_pair(1, 1)
    assert (abs(engine.multiport_coincidence(state, hbs(), ('C', 'D'))) < 1e-12)
    assert (engine.multiport_coincidence(state, hbs(), ()) == 1.0)
    # Two photons into a three-port DFT meet on outputs (0, 1) with probability |1 + w|^2 / 9.
    w = np.exp(2j * math.pi / 3.0)
    expected = abs(1.0 + w) ** 2 / 9.0
    assert (abs(engine.multiport_coincidence(state, balanced_multiport(3), (0, 1)) - expected) < 1e-12)
    with pytest.raises(ValueError):
        engine.multiport_coincidence(state, hbs(), (0, 'C'))


@pytest.mark.positive
def test_detector_coincidence_groups():
    """
    Unit test for 'detector_coincidence' with grouped detectors.

    :return: None
    """
    state = product_state((StateSpec.fock(1),) * 4, build_space(4, 1))
    assert (math.isclose(engine.detector_coincidence(state, [(0, 1), (2, 3)]), 4.0))
    assert (math.isclose(engine.detector_coincidence(state, [(0, 1)]), 2.0))


@pytest.mark.positive
def test_fringe_probabilities_and_fit():
    """
    Unit test for 'fringe_probabilities' and 'fringe_visibility_fit' with coherent inputs.

    :return: None
    """
    state = _pair(StateSpec.coherent(1.0), StateSpec.coherent(0.5), 14)
    thetas = np.linspace(0.0, 2.0 * math.pi, 13)
    counts = [engine.fringe_probabilities(state, theta) for theta in thetas]
    p_c, p_d = counts[0]
    assert (abs(p_c - 0.125) < 1e-8 and abs(p_d - 1.125) < 1e-8)
    fit = engine.fringe_visibility_fit(thetas, [c for c, _ in counts])
    assert (abs(fit.visibility - 0.8) < 1e-8)
    assert (fit.residual < 1e-8)


@pytest.mark.negative
def test_fringe_fit_needs_samples():
    """
    Unit test for 'fringe_visibility_fit' with too few samples or no light.

    :return: None
    """
    with pytest.raises(ValueError):
        engine.fringe_visibility_fit([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(engine.ZeroIntensityException):
        engine.fringe_visibility_fit([0.0, 1.0, 2.0], [0.0, 0.0, 0.0])


@pytest.mark.positive
def test_hom_coincidence_single_input_is_flat():
    """
    Unit test for 'hom_coincidence' with light in one input only.

    :return: None
    """
    state = _pair(StateSpec.coherent(1.0), StateSpec.fock(0), 10)
    reference = engine.hom_coincidence(state, 0.0)
    assert (abs(reference - 0.25) < 1e-6)
    for chi in (math.pi / 6.0, math.pi / 2.0):
        assert (abs(engine.hom_coincidence(state, chi) - reference) < 1e-12)


@pytest.mark.positive
@pytest.mark.parametrize('matrix', [
    [[1.0, 1.0], [1.0, -1.0]],
    [[1.0, 1.0j], [1.0j, 1.0]],
])
def test_coincidence_independent_of_hbs_convention(matrix):
    """
    Unit test for the HBS coincidence of number-diagonal inputs under other beam splitter conventions.

    :return: None
    """
    other = ModeUnitary(np.array(matrix) / math.sqrt(2.0))
    for state in (example2_pair(build_space(2, 4)), _fock_pair(1, 2)):
        expected = engine.multiport_coincidence(state, hbs(), ('C', 'D'))
        assert (abs(engine.multiport_coincidence(state, other, (0, 1)) - expected) < 1e-12)


def _number_diagonal_state(seed, cutoff=3):
    space = build_space(2, cutoff)
    populations = np.random.default_rng(seed).dirichlet(np.ones(space.dimension))
    return QuantumState(space, np.diag(populations))


@pytest.mark.positive
@pytest.mark.parametrize('state', [
    _number_diagonal_state(0),
    _number_diagonal_state(7),
    _pair(StateSpec.number_diagonal((0.4, 0.2, 0.4)), StateSpec.number_diagonal((0.6, 0.3, 0.1))),
    _pair(StateSpec.thermal(0.1), StateSpec.fock(1), 6),
])
def test_hom_dip_rises_without_phase_correlation(state):
    """
    Unit test for a coincidence nondecreasing in chi when G'(2)_AB = 0.

    :return: None
    """
    assert (abs(engine.record_from_state(state, 2, phase_only=True).g_phase(2)) < 1e-12)
    values = [engine.hom_coincidence(state, chi) for chi in np.linspace(0.0, math.pi / 2.0, 11)]
    assert (np.all(np.diff(values) >= -1e-12))


@pytest.mark.positive
@pytest.mark.parametrize('seed', range(10))
def test_hbs_coincidence_identity_on_random_states(seed):
    """
    Unit test for <:N_C N_D:> = (G(2)_AA + G(2)_BB - 2|G'(2)_AB| cos theta_2) / 4 with phase correlation.

    :return: None
    """
    state = random_density_matrix(build_space(2, 4), seed)
    record = engine.record_from_state(state, 2)
    phase = record.g_phase(2)
    assert (abs(phase) > 1e-6)
    expected = (record.g_aa(2) + record.g_bb(2) - 2.0 * abs(phase) * math.cos(np.angle(phase))) / 4.0
    coincidence = engine.multiport_coincidence(state, hbs(), ('C', 'D'))
    assert (abs(coincidence - expected) < 1e-9)
    assert (abs(coincidence - engine.hom_probabilities(record).parallel) < 1e-9)
    assert (abs(engine.hom_coincidence(state, 0.0) - coincidence) < 1e-9)


@pytest.mark.positive
@pytest.mark.parametrize('seed', range(5))
@pytest.mark.parametrize('k', [1, 2])
def test_intensity_cross_symmetric_under_mode_swap(seed, k):
    """
    Unit test for G(3)_k,AB of a state equal to G(3)_(3-k),AB with the modes swapped.

    :return: None
    """
    state = random_density_matrix(build_space(2, 4), seed)
    swapped = embed_state(state, state.space, mode_map=(1, 0))
    assert (abs(engine.intensity_cross_nk(state, 3, k) - engine.intensity_cross_nk(swapped, 3, 3 - k)) < 1e-12)
