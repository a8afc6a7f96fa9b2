"""Unit tests for state_factory."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import config as cfg
import state_factory as factory
from correlation_engine import g2_auto, g2_cross
from fock_core import (
    CutoffException,
    MomentRequest,
    SpaceMismatchException,
    build_space,
    mean_photon_number,
    normal_ordered_moment,
    validate_state,
)


@pytest.mark.positive
@pytest.mark.parametrize('spec, g2', [
    (factory.StateSpec.coherent(1.0 + 0.5j), 1.0),
    (factory.StateSpec.phase_averaged_coherent(0.8), 1.0),
    (factory.StateSpec.thermal(0.3), 2.0),
    (factory.StateSpec.fock(2), 0.5),
])
def test_single_mode_g2(spec, g2):
    """
    Unit test for the autocorrelation of the single-mode constructors.

    :return: None
    """
    state = factory.make_state(spec, build_space(1, 30))
    assert (abs(g2_auto(state, 0) - g2) < 1e-6)
    assert (abs(mean_photon_number(state, 0) - spec.analytic_moments()[0]) < 1e-6)


@pytest.mark.positive
def test_example2_pair_moments():
    """
    Unit test for 'example2_pair'.

    :return: None
    """
    state = factory.example2_pair(build_space(2, 4))
    assert (math.isclose(mean_photon_number(state, 0), 1.0))
    assert (math.isclose(mean_photon_number(state, 1), 0.5))
    assert (math.isclose(g2_auto(state, 0), 0.8))
    assert (math.isclose(g2_auto(state, 1), 0.8))
    assert (math.isclose(g2_cross(state), 1.0))


@pytest.mark.negative
def test_example2_pair_needs_cutoff_two():
    """
    Unit test for 'example2_pair' below cutoff 2.

    :return: None
    """
    with pytest.raises(CutoffException):
        factory.example2_pair(build_space(2, 1))
    with pytest.raises(SpaceMismatchException):
        factory.example2_pair(build_space(1, 4))


@pytest.mark.negative
def test_tail_mass_refused():
    """
    Unit test for the truncation check of the constructors.

    :return: None
    """
    with pytest.raises(factory.TailMassException):
        factory.single_mode_density(factory.StateSpec.coherent(3.0), 5)
    with pytest.raises(factory.TailMassException):
        factory.single_mode_density(factory.StateSpec.fock(4), 3)
    with pytest.raises(factory.TailMassException):
        factory.single_mode_density(factory.StateSpec.thermal(2.0), 4)


@pytest.mark.negative
@pytest.mark.parametrize('builder, value', [
    (factory.StateSpec.fock, -1),
    (factory.StateSpec.fock, 1.5),
    (factory.StateSpec.thermal, -0.1),
    (factory.StateSpec.number_diagonal, (0.5, 0.4)),
    (factory.StateSpec.number_diagonal, (1.2, -0.2)),
])
def test_invalid_state_spec(builder, value):
    """
    Unit test for the StateSpec validation.

    :return: None
    """
    with pytest.raises(factory.InvalidStateSpecException):
        builder(value)


@pytest.mark.positive
def test_mixture_density():
    """
    Unit test for a mixture StateSpec.

    :return: None
    """
    spec = factory.StateSpec.mixture(((0.25, factory.StateSpec.fock(1)), (0.75, factory.StateSpec.fock(0))))
    rho = factory.single_mode_density(spec, 2)
    assert (np.allclose(rho, np.diag([0.75, 0.25, 0.0])))
    assert (spec.classicality_tag == factory.NONCLASSICAL)
    bunched = factory.StateSpec.mixture(((0.9, factory.StateSpec.fock(0)), (0.1, factory.StateSpec.fock(2))))
    assert (bunched.classicality_tag == factory.UNKNOWN)
    with pytest.raises(factory.InvalidStateSpecException):
        factory.StateSpec.mixture(((0.5, factory.StateSpec.fock(1)),))


@pytest.mark.positive
@pytest.mark.parametrize('spec, tag', [
    (factory.StateSpec.coherent(0.5), factory.CLASSICAL),
    (factory.StateSpec.thermal(1.0), factory.CLASSICAL),
    (factory.StateSpec.fock(0), factory.CLASSICAL),
    (factory.StateSpec.fock(1), factory.NONCLASSICAL),
    (factory.EXAMPLE2_MODE_A, factory.NONCLASSICAL),
])
def test_classicality_tag(spec, tag):
    """
    Unit test for 'StateSpec.classicality_tag'.

    :return: None
    """
    assert (spec.classicality_tag == tag)


@pytest.mark.positive
def test_product_state_order():
    """
    Unit test for 'product_state' mode order.

    :return: None
    """
    state = factory.product_state((factory.StateSpec.fock(2), factory.StateSpec.fock(0)), build_space(2, 2))
    assert (math.isclose(mean_photon_number(state, 0), 2.0))
    assert (math.isclose(mean_photon_number(state, 1), 0.0, abs_tol=1e-15))
    with pytest.raises(SpaceMismatchException):
        factory.product_state((factory.StateSpec.fock(1),), build_space(2, 2))


@pytest.mark.positive
@settings(deadline=None, max_examples=20)
@given(seed=st.integers(min_value=0, max_value=2 ** 31))
def test_random_classical_two_mode_is_valid(seed):
    """
    Unit test for 'random_classical_two_mode'.

    :return: None
    """
    state = factory.random_classical_two_mode(seed, build_space(2, 8))
    diagnostics = validate_state(state)
    assert (diagnostics.is_valid)
    assert (max(mean_photon_number(state, 0), mean_photon_number(state, 1)) <= factory.classical_intensity_cap(8))


@pytest.mark.positive
def test_random_classical_two_mode_is_seeded():
    """
    Unit test for the reproducibility of the seeded ensembles.

    :return: None
    """
    space = build_space(2, 6)
    assert (np.array_equal(factory.random_classical_two_mode(7, space).rho,
                           factory.random_classical_two_mode(7, space).rho))
    assert (np.array_equal(factory.random_density_matrix(space, 3).rho, factory.random_density_matrix(space, 3).rho))


@pytest.mark.positive
def test_random_density_matrix_support():
    """
    Unit test for 'random_density_matrix' with a photon cap and a rank.

    :return: None
    """
    space = build_space(2, 3)
    state = factory.random_density_matrix(space, 11, rank=2, max_total_photons=2)
    assert (validate_state(state).is_valid)
    assert (np.all(state.populations[space.total_photons > 2] == 0.0))
    assert (np.linalg.matrix_rank(state.rho, tol=1e-10) == 2)


@pytest.mark.positive
def test_classical_intensity_cap_grows_with_cutoff():
    """
    Unit test for 'classical_intensity_cap'.

    :return: None
    """
    assert (0.0 < factory.classical_intensity_cap(3) < factory.classical_intensity_cap(8))


@pytest.mark.positive
@pytest.mark.parametrize('text, spec', [
    ('fock(3)', factory.StateSpec.fock(3)),
    ('coherent(1.0+0.5i)', factory.StateSpec.coherent(1.0 + 0.5j)),
    ('coherent(0.3i)', factory.StateSpec.coherent(0.3j)),
    ('coherent(-2)', factory.StateSpec.coherent(-2.0)),
    ('thermal(0.5)', factory.StateSpec.thermal(0.5)),
    ('phase_averaged_coherent(1.5)', factory.StateSpec.phase_averaged_coherent(1.5)),
    ('diag(0.4, 0.2, 0.4)', factory.EXAMPLE2_MODE_A),
    ('mix(0.3: fock(1), 0.7: coherent(1.0))',
     factory.StateSpec.mixture(((0.3, factory.StateSpec.fock(1)), (0.7, factory.StateSpec.coherent(1.0))))),
])
def test_parse_state_spec(text, spec):
    """
    Unit test for 'parse_state_spec'.

    :return: None
    """
    assert (factory.parse_state_spec(text) == spec)


@pytest.mark.positive
def test_format_state_spec_is_parseable():
    """
    Unit test for 'format_state_spec'.

    :return: None
    """
    spec = factory.StateSpec.mixture(((0.5, factory.StateSpec.coherent(0.5 - 0.25j)),
                                      (0.5, factory.StateSpec.thermal(0.2))))
    assert (factory.format_state_spec(spec) == 'mix(0.5: coherent(0.5-0.25i), 0.5: thermal(0.2))')
    assert (factory.parse_state_spec(str(spec)) == spec)


@pytest.mark.negative
@pytest.mark.parametrize('text', ['fock(x)', 'squeezed(1.0)', 'fock(1) extra', 'mix(0.5 fock(1))'])
def test_parse_state_spec_syntax_error(text):
    """
    Unit test for 'parse_state_spec' with malformed text.

    :return: None
    """
    with pytest.raises(factory.StateSpecSyntaxException):
        factory.parse_state_spec(text)


@pytest.mark.positive
@pytest.mark.parametrize('power', [1, 2, 3])
def test_phase_averaged_coherent_has_no_coherence(power):
    """
    Unit test for <a^n> = 0 on a phase-averaged coherent state with the coherent populations.

    :return: None
    """
    space = build_space(1, 12)
    averaged = factory.make_state(factory.StateSpec.phase_averaged_coherent(1.2), space)
    coherent = factory.make_state(factory.StateSpec.coherent(1.2j), space)
    request = MomentRequest((0,), (power,))
    assert (abs(normal_ordered_moment(averaged, request)) < 1e-12)
    assert (abs(normal_ordered_moment(coherent, request)) > 0.1)
    assert (np.allclose(averaged.populations, coherent.populations, atol=1e-12))


@pytest.mark.positive
@pytest.mark.parametrize('creation, annihilation', [
    ({0: 1}, {0: 1}),
    ({0: 2}, {0: 2}),
    ({}, {0: 1}),
    ({0: 1}, {1: 1}),
    ({0: 2}, {1: 2}),
    ({0: 1, 1: 1}, {0: 1, 1: 1}),
])
def test_mixture_moments_are_weighted_moments(creation, annihilation):
    """
    Unit test for mixtures: moments of the mixture equal the weighted moments of its components.

    :return: None
    """
    components = ((0.5, factory.StateSpec.coherent(0.5 + 0.2j)), (0.3, factory.StateSpec.fock(1)),
                  (0.2, factory.StateSpec.thermal(0.3)))
    partner = factory.StateSpec.coherent(0.4)
    space = build_space(2, 10)
    request = MomentRequest.on_modes(2, creation, annihilation)
    mixed = factory.product_state((factory.StateSpec.mixture(components), partner), space)
    expected = sum(weight * normal_ordered_moment(factory.product_state((spec, partner), space), request)
                   for weight, spec in components)
    assert (abs(normal_ordered_moment(mixed, request) - expected) < 1e-10)


@pytest.mark.positive
@pytest.mark.parametrize('seed', [3, 17])
def test_classical_ensemble_at_doubled_cutoff(seed):
    """
    Unit test for 'draw_classical_ensemble' rebuilt at twice its cutoff.

    :return: None
    """
    ensemble = factory.draw_classical_ensemble(seed, 6)
    base = ensemble.state(build_space(2, 6))
    doubled = ensemble.state(build_space(2, 12))
    assert (np.array_equal(base.rho, factory.random_classical_two_mode(seed, build_space(2, 6)).rho))
    for mode in (0, 1):
        nbar = mean_photon_number(base, mode)
        assert (abs(mean_photon_number(doubled, mode) - nbar) <= 1e-10 * nbar)
    assert (abs(g2_cross(doubled) - g2_cross(base)) < 1e-9)
    assert (len(ensemble.weights) >= cfg.CLASSICAL_MIN_COMPONENTS)
    with pytest.raises(SpaceMismatchException):
        ensemble.state(build_space(2, 6, max_total_photons=6))
