"""
Correlation functions of two-mode (A, B) states and the records built from them.

A CorrelationRecord is the interface between simulation and the duality
metrics. It is filled either from a QuantumState (every entry a
normal-ordered moment) or from the parametric (g2, zeta) description.
"""
import math
from collections import namedtuple
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Tuple

import numpy as np

import config as cfg
from fock_core import (
    CutoffException,
    MomentRequest,
    PhotonCountDistribution,
    SpaceMismatchException,
    check_mode,
    mean_photon_number,
    normal_ordered_moment,
    real_part,
)
from linear_optics import (
    DistinguishabilityAngle,
    hbs,
    internal_rotation,
    output_distribution,
    phase_shifter,
    spatial_hbs,
)


class IncompleteRecordException(Exception):
    """A record lacks a moment the computation needs."""


class ZeroIntensityException(Exception):
    """A normalization by a vanishing intensity."""


class InvalidRecordException(Exception):
    """A record or parameter set violating its invariants."""


class ConsistencyException(Exception):
    """Two algebraically identical forms of a quantity disagree."""


class SplitIndexException(Exception):
    """A split index k outside 1..n-1."""


HomProbabilities = namedtuple('HomProbabilities', ['parallel', 'perp'])
FringeFit = namedtuple('FringeFit', ['offset', 'amplitude', 'phase', 'visibility', 'residual'])


def check_split(n, k):
    """Validate 1 <= k <= n - 1."""
    if int(k) != k or not 1 <= k <= n - 1:
        raise SplitIndexException('Split index k = {k} outside 1..{top} for order {n}.'.format(k=k, top=n - 1, n=n))
    return int(k)


def _frozen(mapping):
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class CorrelationRecord(object):
    """
    Normal-ordered moments of a two-mode (A, B) input.

    auto_aa[m], auto_bb[m]:      <a^dagger^m a^m> of A and B
    phase_cross[m]:              <a_A^dagger^m a_B^m>, argument theta_m
    intensity_cross[(m, k)]:     <:N_A^k N_B^(m-k):> for 1 <= k <= m - 1
    """

    order: int
    auto_aa: Mapping[int, float]
    auto_bb: Mapping[int, float]
    phase_cross: Mapping[int, complex] = field(default_factory=dict)
    intensity_cross: Mapping[Tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise InvalidRecordException('Record order must be a positive integer, got {n}.'.format(n=self.order))
        auto_aa = {int(m): float(v) for m, v in self.auto_aa.items()}
        auto_bb = {int(m): float(v) for m, v in self.auto_bb.items()}
        phase_cross = {int(m): complex(v) for m, v in self.phase_cross.items()}
        intensity_cross = {(int(m), int(k)): float(v) for (m, k), v in self.intensity_cross.items()}
        for name, values in (('G_AA', auto_aa), ('G_BB', auto_bb), ('G_AB', intensity_cross)):
            for key, value in values.items():
                if value < -cfg.IMAGINARY_TOLERANCE:
                    raise InvalidRecordException('{name}{key} = {val} is negative.'.format(
                            name=name, key=key, val=value))
        for m, value in phase_cross.items():
            if m in auto_aa and m in auto_bb:
                bound = auto_aa[m] * auto_bb[m]
                if abs(value) ** 2 > bound + cfg.POSITIVITY_TOLERANCE * max(1.0, bound):
                    raise InvalidRecordException(
                            '|G\'({m})_AB|^2 = {lhs} exceeds G({m})_AA G({m})_BB = {rhs}.'.format(
                                    m=m, lhs=abs(value) ** 2, rhs=bound))
        object.__setattr__(self, 'order', int(self.order))
        object.__setattr__(self, 'auto_aa', _frozen(auto_aa))
        object.__setattr__(self, 'auto_bb', _frozen(auto_bb))
        object.__setattr__(self, 'phase_cross', _frozen(phase_cross))
        object.__setattr__(self, 'intensity_cross', _frozen(intensity_cross))

    @staticmethod
    def _lookup(values, key, name):
        try:
            return values[key]
        except KeyError:
            raise IncompleteRecordException('Record has no {name} entry for {key}.'.format(name=name, key=key))

    def g_aa(self, m):
        return self._lookup(self.auto_aa, m, 'G_AA')

    def g_bb(self, m):
        return self._lookup(self.auto_bb, m, 'G_BB')

    def g_phase(self, m):
        return self._lookup(self.phase_cross, m, 'G\'_AB')

    def g_intensity(self, n, k):
        return self._lookup(self.intensity_cross, (n, check_split(n, k)), 'G_k,AB')

    @property
    def G1_AA(self):
        return self.g_aa(1)

    @property
    def G1_BB(self):
        return self.g_bb(1)

    def to_keyvalue(self):
        """
        Flat key-value form: G<m>_AA, G<m>_BB, G<m>p_AB_re/_im, G2_AB and G<m>_<k>_AB.

        :return: dict
            Insertion-ordered mapping of key to float.
        """
        values = {}
        for m in sorted(self.auto_aa):
            values['G{m}_AA'.format(m=m)] = self.auto_aa[m]
        for m in sorted(self.auto_bb):
            values['G{m}_BB'.format(m=m)] = self.auto_bb[m]
        for m in sorted(self.phase_cross):
            values['G{m}p_AB_re'.format(m=m)] = self.phase_cross[m].real
            values['G{m}p_AB_im'.format(m=m)] = self.phase_cross[m].imag
        for m, k in sorted(self.intensity_cross):
            key = 'G2_AB' if (m, k) == (2, 1) else 'G{m}_{k}_AB'.format(m=m, k=k)
            values[key] = self.intensity_cross[(m, k)]
        return values


@dataclass(frozen=True)
class ParametricCorrelations(object):
    """
    Second-order description of a phase-uncorrelated input pair.

    g2p_ab is the normalized phase cross G'(2)_AB / (G1_AA G1_BB),
    zero for inputs without phase correlation.
    """

    g2_aa: float
    g2_bb: float
    g2_ab: float
    zeta: float
    nbar_b: float = cfg.DEFAULT_NBAR_B
    g2p_ab: complex = 0j

    def __post_init__(self):
        for name in ('g2_aa', 'g2_bb', 'g2_ab'):
            value = float(getattr(self, name))
            if value < 0.0 or not math.isfinite(value):
                raise InvalidRecordException('{name} must be a nonnegative number, got {val}.'.format(
                        name=name, val=value))
            object.__setattr__(self, name, value)
        for name in ('zeta', 'nbar_b'):
            value = float(getattr(self, name))
            if value <= 0.0 or not math.isfinite(value):
                raise InvalidRecordException('{name} must be positive, got {val}.'.format(name=name, val=value))
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'g2p_ab', complex(self.g2p_ab))


def record_from_parameters(p):
    """
    Order-2 record of a parametric description.

    :param p: ParametricCorrelations
    :return: CorrelationRecord
    """
    g1_bb = p.nbar_b
    g1_aa = p.zeta * p.nbar_b
    return CorrelationRecord(
            order=2,
            auto_aa={1: g1_aa, 2: p.g2_aa * g1_aa ** 2},
            auto_bb={1: g1_bb, 2: p.g2_bb * g1_bb ** 2},
            phase_cross={1: 0j, 2: p.g2p_ab * g1_aa * g1_bb},
            intensity_cross={(2, 1): p.g2_ab * g1_aa * g1_bb})


def _two_mode_moment(state, creation, annihilation, name, is_real=True):
    value = normal_ordered_moment(state, MomentRequest.on_modes(2, creation, annihilation))
    return real_part(value, name=name) if is_real else value


def _check_two_mode(state):
    if state.space.num_modes != 2:
        raise SpaceMismatchException('Correlations are defined on a two-mode (A, B) space, got {num} modes.'.format(
                num=state.space.num_modes))


def record_from_state(state, n, phase_only=False):
    """
    Record of a two-mode state up to order n.

    Autocorrelations are filled up to order 2n (the which-path moments of every
    (n, k) split), phase crosses up to n and intensity crosses for every order
    2..n. With phase_only, autocorrelations stop at order n and intensity
    crosses are left out.

    :param state: QuantumState
    :param n: int
    :param phase_only: boolean
    :return: CorrelationRecord
    """
    _check_two_mode(state)
    if int(n) != n or n < 1:
        raise ValueError('Order must be a positive integer, got {n}.'.format(n=n))
    top = n if phase_only else 2 * n
    if top > state.space.cutoff:
        raise CutoffException('Order {n} needs cutoff >= {top}, got {cut}.'.format(
                n=n, top=top, cut=state.space.cutoff))
    auto_aa = {m: _two_mode_moment(state, {0: m}, {0: m}, 'G({m})_AA'.format(m=m)) for m in range(1, top + 1)}
    auto_bb = {m: _two_mode_moment(state, {1: m}, {1: m}, 'G({m})_BB'.format(m=m)) for m in range(1, top + 1)}
    phase_cross = {m: _two_mode_moment(state, {0: m}, {1: m}, None, is_real=False) for m in range(1, n + 1)}
    intensity_cross = {}
    if not phase_only:
        for m in range(2, n + 1):
            for k in range(1, m):
                intensity_cross[(m, k)] = intensity_cross_nk(state, m, k)
    return CorrelationRecord(n, auto_aa, auto_bb, phase_cross, intensity_cross)


def g2_auto(state, mode):
    """
    Normalized autocorrelation G(2)/G(1)^2 of one mode.

    :param state: QuantumState
    :param mode: int
    :return: float
    """
    mode = check_mode(state.space, mode)
    nbar = mean_photon_number(state, mode)
    if nbar < cfg.UNDEFINED_THRESHOLD:
        raise ZeroIntensityException('g2 of mode {mode} is undefined at zero intensity.'.format(mode=mode))
    request = MomentRequest.on_modes(state.space.num_modes, {mode: 2}, {mode: 2})
    return real_part(normal_ordered_moment(state, request), name='G(2)') / nbar ** 2


def g2_cross(state):
    """Normalized cross correlation G(2)_AB / (G(1)_AA G(1)_BB) of a two-mode state."""
    _check_two_mode(state)
    nbar_a = mean_photon_number(state, 0)
    nbar_b = mean_photon_number(state, 1)
    if min(nbar_a, nbar_b) < cfg.UNDEFINED_THRESHOLD:
        raise ZeroIntensityException('g2_AB is undefined when a mode has zero intensity.')
    return intensity_cross_nk(state, 2, 1) / (nbar_a * nbar_b)


def intensity_cross_nk(state, n, k):
    """
    Intensity cross correlation <:N_A^k N_B^(n-k):>.

    :param state: QuantumState
        Two-mode state with cutoff >= max(k, n - k).
    :param n: int
    :param k: int
    :return: float
    """
    _check_two_mode(state)
    k = check_split(n, k)
    powers = {0: k, 1: n - k}
    return _two_mode_moment(state, powers, powers, 'G({n})_{k},AB'.format(n=n, k=k))


def hom_probabilities(record, tolerance=None):
    """
    Coincidence probabilities behind an HBS for indistinguishable and distinguishable inputs.

    P_perp = <:(N_A + N_B)^2:>/4 and P_parallel = P_perp - (G(2)_AB + |G'(2)_AB| cos theta_2)/2,
    cross-checked against the closed form (G(2)_AA + G(2)_BB - 2|G'(2)_AB| cos theta_2)/4.

    :param record: CorrelationRecord
    :param tolerance: float
        Allowed disagreement between the two forms, relative to the larger
        of one and P_perp. Defaults to config.HOM_FORM_TOLERANCE.
    :return: HomProbabilities
    """
    if tolerance is None:
        tolerance = cfg.HOM_FORM_TOLERANCE
    g_aa = record.g_aa(2)
    g_bb = record.g_bb(2)
    g_ab = record.g_intensity(2, 1)
    phase = record.g_phase(2)
    coherent_part = abs(phase) * math.cos(np.angle(phase))
    perp = (g_aa + g_bb + 2.0 * g_ab) / 4.0
    parallel = perp - (g_ab + coherent_part) / 2.0
    closed_form = (g_aa + g_bb - 2.0 * coherent_part) / 4.0
    if abs(parallel - closed_form) > tolerance * max(1.0, perp):
        raise ConsistencyException('P_parallel forms disagree: {a!r} vs {b!r}.'.format(a=parallel, b=closed_form))
    return HomProbabilities(parallel, perp)


def detector_coincidence(state, groups):
    """
    Normal-ordered coincidence <:prod_g (sum_{j in g} N_j):> over detector groups.

    :param state: QuantumState
    :param groups: sequence of sequence of int
        Each group lists the modes one detector integrates over.
    :return: float
    """
    groups = [[check_mode(state.space, mode) for mode in group] for group in groups]
    return PhotonCountDistribution.from_state(state).coincidence(groups)


def multiport_coincidence(state, network, detector_set):
    """
    Coincidence <:prod_{j in set} N_j:> behind a network.

    :param state: QuantumState
        Input on the first modes of the network.
    :param network: ModeUnitary
    :param detector_set: sequence of int or str
        Output modes by index or label, all distinct.
    :return: float
    """
    modes = [network.index_of(mode) if isinstance(mode, str) else mode for mode in detector_set]
    if len(set(modes)) != len(modes):
        raise ValueError('Detector set {modes} repeats a mode.'.format(modes=list(detector_set)))
    if not modes:
        return 1.0
    return output_distribution(state, network).coincidence([[mode] for mode in modes])


def hom_coincidence(state, chi):
    """
    HOM coincidence at distinguishability angle chi.

    Embeds (A, B) on internal modes, rotates B's internal mode by chi, applies
    the spatial HBS and correlates N_C = N_C_u + N_C_v with N_D = N_D_u + N_D_v.

    :param state: QuantumState
    :param chi: float or DistinguishabilityAngle
    :return: float
    """
    _check_two_mode(state)
    angle = chi if isinstance(chi, DistinguishabilityAngle) else DistinguishabilityAngle(chi)
    network = spatial_hbs() @ internal_rotation(angle.chi)
    return output_distribution(state, network, input_modes=(0, 2)).coincidence([(0, 1), (2, 3)])


def fringe_probabilities(state, theta):
    """
    Mean counts (P_C, P_D) behind the HBS with a phase theta on mode B.

    :param state: QuantumState
    :param theta: float
    :return: tuple
    """
    _check_two_mode(state)
    output = output_distribution(state, hbs() @ phase_shifter(1, theta, 2))
    return output.mean_photon_number(0), output.mean_photon_number(1)


def fringe_visibility_fit(thetas, counts):
    """
    Least-squares fit of counts = offset + amplitude cos(theta + phase).

    :param thetas: sequence of float
    :param counts: sequence of float
    :return: FringeFit
        visibility is amplitude / offset.
    """
    thetas = np.asarray(thetas, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if len(thetas) < 3 or len(thetas) != len(counts):
        raise ValueError('A fringe fit needs at least three matching samples.')
    design = np.column_stack([np.ones_like(thetas), np.cos(thetas), np.sin(thetas)])
    (offset, cosine, sine), _, _, _ = np.linalg.lstsq(design, counts, rcond=None)
    if offset <= cfg.UNDEFINED_THRESHOLD * np.max(np.abs(counts)):
        raise ZeroIntensityException('Fringe offset vanishes; the visibility is undefined.')
    amplitude = math.hypot(cosine, sine)
    residual = float(np.max(np.abs(design @ np.array([offset, cosine, sine]) - counts)))
    return FringeFit(float(offset), amplitude, math.atan2(-sine, cosine), amplitude / offset, residual)
