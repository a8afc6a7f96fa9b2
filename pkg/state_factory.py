"""
Constructors for the input states of the interferometers.

Fock, coherent, phase-averaged coherent, thermal, number-diagonal and mixed
single-mode states, products of them, the number-diagonal pair realizing the
g2_auto = 0.8, zeta = 2 example, and seeded random ensembles for property runs.

StateSpec text grammar (parse_state_spec / format_state_spec)::

    spec   := fock(N) | coherent(Z) | phase_averaged_coherent(R) | thermal(R)
            | diag(R, R, ...) | mix(R: spec, R: spec, ...)
    Z      := R | Ri | R+Ri | R-Ri          e.g. 1.0+0.5i, 0.3i, -2
"""
import functools
import math
from dataclasses import dataclass
from typing import Any, Tuple

import numpy as np
import pyparsing as pp
from scipy.optimize import brentq
from scipy.stats import geom, poisson

import config as cfg
from fock_core import (
    CutoffException,
    QuantumState,
    SpaceMismatchException,
    build_space,
    embed_state,
)


class InvalidStateSpecException(Exception):
    """A StateSpec with invalid parameters."""


class TailMassException(Exception):
    """The truncation discards more probability than allowed; a larger cutoff is needed."""


class StateSpecSyntaxException(Exception):
    """A StateSpec text that does not follow the grammar."""


CLASSICAL = 'classical'
NONCLASSICAL = 'nonclassical'
UNKNOWN = 'unknown'

FOCK = 'fock'
COHERENT = 'coherent'
PHASE_AVERAGED_COHERENT = 'phase_averaged_coherent'
THERMAL = 'thermal'
NUMBER_DIAGONAL = 'number_diagonal'
MIXTURE = 'mixture'

_CLASSICAL_KINDS = (COHERENT, PHASE_AVERAGED_COHERENT, THERMAL)


@dataclass(frozen=True)
class StateSpec(object):
    """
    Description of a single-mode input state.

    value holds the kind's parameter: n for fock, the complex amplitude for
    coherent, |alpha| for phase_averaged_coherent, the mean photon number for
    thermal and the probability tuple for number_diagonal. components holds
    (weight, StateSpec) pairs for mixture.
    """

    kind: str
    value: Any = None
    components: Tuple[Tuple[float, 'StateSpec'], ...] = ()

    def __post_init__(self):
        validator = _VALIDATORS.get(self.kind)
        if validator is None:
            raise InvalidStateSpecException('Unknown state kind \'{kind}\'.'.format(kind=self.kind))
        validator(self)

    @classmethod
    def fock(cls, n):
        return cls(FOCK, n)

    @classmethod
    def coherent(cls, alpha):
        return cls(COHERENT, alpha)

    @classmethod
    def phase_averaged_coherent(cls, amplitude):
        return cls(PHASE_AVERAGED_COHERENT, amplitude)

    @classmethod
    def thermal(cls, nbar):
        return cls(THERMAL, nbar)

    @classmethod
    def number_diagonal(cls, probabilities):
        return cls(NUMBER_DIAGONAL, probabilities)

    @classmethod
    def mixture(cls, components):
        return cls(MIXTURE, None, components)

    def analytic_moments(self):
        """
        Untruncated mean photon number and second factorial moment <a^dagger^2 a^2>.

        :return: tuple
        """
        if self.kind == FOCK:
            return float(self.value), float(self.value * (self.value - 1))
        if self.kind in (COHERENT, PHASE_AVERAGED_COHERENT):
            intensity = abs(self.value) ** 2
            return intensity, intensity ** 2
        if self.kind == THERMAL:
            return self.value, 2.0 * self.value ** 2
        if self.kind == NUMBER_DIAGONAL:
            n = np.arange(len(self.value))
            probabilities = np.asarray(self.value)
            return float(probabilities @ n), float(probabilities @ (n * (n - 1)))
        moments = np.array([component.analytic_moments() for _, component in self.components])
        weights = np.array([weight for weight, _ in self.components])
        mean, second = weights @ moments
        return float(mean), float(second)

    @property
    def classicality_tag(self):
        """
        Structural classicality tag.

        classical: built only from coherent, phase-averaged coherent and thermal
        states (mixtures of coherent states). nonclassical: g2 < 1, which covers
        fock(n >= 1). unknown otherwise.
        """
        if self._is_structurally_classical():
            return CLASSICAL
        mean, second = self.analytic_moments()
        if mean > 0.0 and second / mean ** 2 < 1.0:
            return NONCLASSICAL
        return UNKNOWN

    def _is_structurally_classical(self):
        if self.kind in _CLASSICAL_KINDS:
            return True
        if self.kind == FOCK:
            return self.value == 0
        if self.kind == NUMBER_DIAGONAL:
            return len(self.value) == 1 or not any(self.value[1:])
        if self.kind == MIXTURE:
            return all(component._is_structurally_classical() for _, component in self.components)
        return False

    def __str__(self):
        return format_state_spec(self)


def _validate_fock(spec):
    if int(spec.value) != spec.value or spec.value < 0:
        raise InvalidStateSpecException('fock needs a nonnegative integer, got {val}.'.format(val=spec.value))
    object.__setattr__(spec, 'value', int(spec.value))


def _validate_coherent(spec):
    object.__setattr__(spec, 'value', complex(spec.value))


def _validate_nonnegative(spec):
    value = float(spec.value)
    if value < 0.0 or not math.isfinite(value):
        raise InvalidStateSpecException('{kind} needs a nonnegative value, got {val}.'.format(
                kind=spec.kind, val=spec.value))
    object.__setattr__(spec, 'value', value)


def _check_distribution(values, name):
    values = tuple(float(v) for v in values)
    if not values:
        raise InvalidStateSpecException('{name} must not be empty.'.format(name=name))
    if any(v < 0.0 for v in values):
        raise InvalidStateSpecException('{name} must be nonnegative, got {val}.'.format(name=name, val=values))
    if abs(sum(values) - 1.0) > cfg.PROBABILITY_SUM_TOLERANCE:
        raise InvalidStateSpecException('{name} must sum to one, got {total!r}.'.format(
                name=name, total=sum(values)))
    return values


def _validate_number_diagonal(spec):
    object.__setattr__(spec, 'value', _check_distribution(spec.value, 'Probabilities'))


def _validate_mixture(spec):
    components = tuple((float(weight), component) for weight, component in spec.components)
    if any(not isinstance(component, StateSpec) for _, component in components):
        raise InvalidStateSpecException('Mixture components must be StateSpec instances.')
    _check_distribution([weight for weight, _ in components], 'Mixture weights')
    object.__setattr__(spec, 'components', components)


_VALIDATORS = {
    FOCK: _validate_fock,
    COHERENT: _validate_coherent,
    PHASE_AVERAGED_COHERENT: _validate_nonnegative,
    THERMAL: _validate_nonnegative,
    NUMBER_DIAGONAL: _validate_number_diagonal,
    MIXTURE: _validate_mixture,
}


def _check_tail(spec, lost, cutoff, tail_threshold):
    if lost > tail_threshold:
        raise TailMassException(
                '{spec} loses probability {lost:.3e} above cutoff {cut} (threshold {thr:.1e}); '
                'increase the cutoff.'.format(spec=format_state_spec(spec), lost=lost, cut=cutoff, thr=tail_threshold))


def coherent_ket(alpha, cutoff):
    """
    Truncated, renormalized coherent-state vector.

    :param alpha: complex
    :param cutoff: int
    :return: numpy.ndarray
    """
    n = np.arange(cutoff + 1)
    amplitudes = np.sqrt(poisson.pmf(n, abs(alpha) ** 2)) * np.exp(1j * n * np.angle(alpha))
    return amplitudes / np.linalg.norm(amplitudes)


def single_mode_density(spec, cutoff, tail_threshold=None):
    """
    Density matrix of a single-mode spec truncated at the cutoff.

    :param spec: StateSpec
    :param cutoff: int
    :param tail_threshold: float
        Largest probability the truncation may discard, defaults to config.TAIL_MASS_THRESHOLD.
    :return: numpy.ndarray
    """
    if tail_threshold is None:
        tail_threshold = cfg.TAIL_MASS_THRESHOLD
    n = np.arange(cutoff + 1)
    if spec.kind == FOCK:
        _check_tail(spec, 1.0 if spec.value > cutoff else 0.0, cutoff, tail_threshold)
        populations = (n == spec.value).astype(float)
    elif spec.kind == COHERENT:
        _check_tail(spec, poisson.sf(cutoff, abs(spec.value) ** 2), cutoff, tail_threshold)
        ket = coherent_ket(spec.value, cutoff)
        return np.outer(ket, ket.conj())
    elif spec.kind == PHASE_AVERAGED_COHERENT:
        # Averaging over the phase removes every number-basis coherence.
        _check_tail(spec, poisson.sf(cutoff, spec.value ** 2), cutoff, tail_threshold)
        populations = poisson.pmf(n, spec.value ** 2)
    elif spec.kind == THERMAL:
        success = 1.0 / (1.0 + spec.value)
        _check_tail(spec, geom.sf(cutoff, success, loc=-1), cutoff, tail_threshold)
        populations = geom.pmf(n, success, loc=-1)
    elif spec.kind == NUMBER_DIAGONAL:
        probabilities = np.asarray(spec.value)
        _check_tail(spec, probabilities[cutoff + 1:].sum(), cutoff, tail_threshold)
        populations = np.zeros(cutoff + 1)
        kept = min(len(probabilities), cutoff + 1)
        populations[:kept] = probabilities[:kept]
    else:
        rho = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        for weight, component in spec.components:
            rho += weight * single_mode_density(component, cutoff, tail_threshold)
        return rho
    return np.diag(populations / populations.sum()).astype(complex)


def make_state(spec, space, mode=0, tail_threshold=None):
    """
    Prepare a spec on one mode of a space, vacuum on every other mode.

    :param spec: StateSpec
    :param space: FockSpace
    :param mode: int
    :param tail_threshold: float
    :return: QuantumState
    """
    single = QuantumState(build_space(1, space.cutoff), single_mode_density(spec, space.cutoff, tail_threshold))
    return embed_state(single, space, mode_map=(mode,))


def product_state(specs, space, tail_threshold=None):
    """
    Tensor product of one spec per mode.

    :param specs: sequence of StateSpec
        One spec per mode, mode 0 first.
    :param space: FockSpace
        An uncapped space.
    :param tail_threshold: float
    :return: QuantumState
    """
    if len(specs) != space.num_modes:
        raise SpaceMismatchException('{num} specs for a {modes}-mode space.'.format(
                num=len(specs), modes=space.num_modes))
    if space.is_capped:
        raise SpaceMismatchException('Product states need an uncapped space.')
    densities = [single_mode_density(spec, space.cutoff, tail_threshold) for spec in specs]
    return QuantumState(space, functools.reduce(np.kron, densities))


EXAMPLE2_MODE_A = StateSpec.number_diagonal((0.4, 0.2, 0.4))
EXAMPLE2_MODE_B = StateSpec.number_diagonal((0.6, 0.3, 0.1))


def example2_pair(space):
    """
    Independent number-diagonal pair with g2_AA = g2_BB = 0.8, zeta = 2 and g2_AB = 1.

    Mode A: p = (0.4, 0.2, 0.4), so nbar = 1 and G2 = 0.8.
    Mode B: p = (0.6, 0.3, 0.1), so nbar = 0.5 and G2 = 0.2.

    :param space: FockSpace
        Uncapped two-mode space with cutoff >= 2.
    :return: QuantumState
    """
    if space.num_modes != 2:
        raise SpaceMismatchException('example2_pair needs a two-mode space.')
    if space.cutoff < 2:
        raise CutoffException('example2_pair needs cutoff >= 2, got {cut}.'.format(cut=space.cutoff))
    return product_state((EXAMPLE2_MODE_A, EXAMPLE2_MODE_B), space)


def _largest_log_intensity(func, low, high):
    if func(low) >= 0.0:
        return low
    if func(high) <= 0.0:
        return high
    return brentq(func, low, high)


@functools.lru_cache(maxsize=None)
def classical_intensity_cap(cutoff, tail_threshold=None, relative_error=None):
    """
    Largest coherent intensity |alpha|^2 a random classical component may take.

    The truncation must discard less than tail_threshold of the probability and
    change the second-order moments by less than relative_error (relative).
    The second condition needs cutoff >= 2 and is skipped below.

    :param cutoff: int
    :param tail_threshold: float
    :param relative_error: float
    :return: float
    """
    if tail_threshold is None:
        tail_threshold = cfg.TAIL_MASS_THRESHOLD
    if relative_error is None:
        relative_error = cfg.CLASSICAL_TRUNCATION_ERROR
    # Keep the Poisson tail above the float underflow at the lower end of the bracket.
    low = max(math.log(1e-30), (-600.0 + math.lgamma(cutoff + 2)) / (cutoff + 1))
    high = math.log(10.0 * (cutoff + 1))
    cap = _largest_log_intensity(lambda x: poisson.logsf(cutoff, math.exp(x)) - math.log(tail_threshold),
                                 low, high)
    if cutoff >= 2:
        cap = min(cap, _largest_log_intensity(
                lambda x: (poisson.logsf(cutoff, math.exp(x)) + 2.0 * math.log(cutoff + 1) - 2.0 * x
                           - math.log(relative_error)),
                low, high))
    return math.exp(cap)


@dataclass(frozen=True, eq=False)
class ClassicalEnsemble(object):
    """Weights and (alpha_A, alpha_B) amplitudes of a mixture of two-mode coherent products."""

    weights: np.ndarray
    amplitudes: np.ndarray

    def state(self, space):
        """
        The mixture on an uncapped two-mode space.

        :param space: FockSpace
        :return: QuantumState
        """
        if space.num_modes != 2 or space.is_capped:
            raise SpaceMismatchException('A classical ensemble needs an uncapped two-mode space.')
        rho = np.zeros((space.dimension, space.dimension), dtype=complex)
        for weight, (alpha_a, alpha_b) in zip(self.weights, self.amplitudes):
            ket = np.kron(coherent_ket(alpha_a, space.cutoff), coherent_ket(alpha_b, space.cutoff))
            rho += weight * np.outer(ket, ket.conj())
        return QuantumState(space, (rho + rho.conj().T) / 2.0)


def draw_classical_ensemble(seed, cutoff):
    """
    Seeded mixture parameters for a given cutoff.

    Between config.CLASSICAL_MIN_COMPONENTS and config.CLASSICAL_MAX_COMPONENTS
    components with Dirichlet weights, uniform phases and intensities below
    classical_intensity_cap(cutoff). The same ensemble can then be built at
    any larger cutoff.

    :param seed: int
    :param cutoff: int
    :return: ClassicalEnsemble
    """
    rng = np.random.default_rng(seed)
    num_components = int(rng.integers(cfg.CLASSICAL_MIN_COMPONENTS, cfg.CLASSICAL_MAX_COMPONENTS + 1))
    cap = classical_intensity_cap(cutoff)
    weights = rng.dirichlet(np.ones(num_components))
    amplitudes = np.array([np.sqrt(cap * rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
                           for _ in weights])
    return ClassicalEnsemble(weights, amplitudes)


def random_classical_two_mode(seed, space):
    """
    Seeded mixture of two-mode coherent products, drawn for the space's cutoff.

    :param seed: int
    :param space: FockSpace
        Uncapped two-mode space.
    :return: QuantumState
    """
    if space.num_modes != 2 or space.is_capped:
        raise SpaceMismatchException('random_classical_two_mode needs an uncapped two-mode space.')
    return draw_classical_ensemble(seed, space.cutoff).state(space)


def random_density_matrix(space, seed, rank=None, max_total_photons=None):
    """
    Seeded random density matrix (Ginibre ensemble).

    :param space: FockSpace
    :param seed: int
    :param rank: int
        Rank of the state, defaults to full rank on the allowed subspace.
    :param max_total_photons: int
        Restrict the support to sectors with at most this many photons.
    :return: QuantumState
    """
    rng = np.random.default_rng(seed)
    if max_total_photons is None:
        allowed = np.arange(space.dimension)
    else:
        allowed = np.flatnonzero(space.total_photons <= max_total_photons)
    rank = rank or len(allowed)
    ginibre = rng.normal(size=(len(allowed), rank)) + 1j * rng.normal(size=(len(allowed), rank))
    block = ginibre @ ginibre.conj().T
    rho = np.zeros((space.dimension, space.dimension), dtype=complex)
    rho[np.ix_(allowed, allowed)] = block / np.trace(block).real
    return QuantumState(space, (rho + rho.conj().T) / 2.0)


_UNSIGNED = r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_REAL = r'[+-]?' + _UNSIGNED
_COMPLEX = r'{real}[ij]|{real}(?:[+-]{unsigned}[ij])?'.format(real=_REAL, unsigned=_UNSIGNED)


@functools.lru_cache(maxsize=1)
def _grammar():
    lpar, rpar, colon, comma = map(pp.Suppress, '():,')
    real = pp.Regex(_REAL).set_parse_action(lambda tokens: float(tokens[0]))
    integer = pp.Regex(r'\d+').set_parse_action(lambda tokens: int(tokens[0]))
    complex_literal = pp.Regex(_COMPLEX).set_parse_action(
            lambda tokens: complex(tokens[0].replace('i', 'j')))
    spec = pp.Forward()

    def single(keyword, argument, factory):
        return (pp.Suppress(pp.Keyword(keyword)) + lpar + argument + rpar).set_parse_action(
                lambda tokens: factory(tokens[0]))

    probabilities = pp.Group(real + pp.ZeroOrMore(comma + real))
    mix_item = pp.Group(real + colon + spec)
    mix = (pp.Suppress(pp.Keyword('mix')) + lpar + mix_item + pp.ZeroOrMore(comma + mix_item) + rpar)
    spec <<= (single('fock', integer, StateSpec.fock)
              | single('coherent', complex_literal, StateSpec.coherent)
              | single(PHASE_AVERAGED_COHERENT, real, StateSpec.phase_averaged_coherent)
              | single('thermal', real, StateSpec.thermal)
              | single('diag', probabilities, lambda values: StateSpec.number_diagonal(tuple(values)))
              | single(NUMBER_DIAGONAL, probabilities, lambda values: StateSpec.number_diagonal(tuple(values)))
              | mix.set_parse_action(
                    lambda tokens: StateSpec.mixture(tuple((item[0], item[1]) for item in tokens))))
    return spec


def parse_state_spec(text):
    """
    Parse the canonical text form of a StateSpec.

    :param text: str
        For e.g., 'thermal(0.5)' or 'mix(0.3: fock(1), 0.7: coherent(1.0+0.0i))'.
    :return: StateSpec
    """
    try:
        return _grammar().parse_string(text.strip(), parse_all=True)[0]
    except pp.ParseException as err:
        raise StateSpecSyntaxException('Cannot parse state spec \'{text}\': {err}'.format(text=text, err=err))


def _fmt(value):
    return cfg.FLOAT_FORMAT.format(value)


def format_state_spec(spec):
    """
    Canonical text form of a StateSpec, accepted by parse_state_spec.

    :param spec: StateSpec
    :return: str
    """
    if spec.kind == FOCK:
        return 'fock({n})'.format(n=spec.value)
    if spec.kind == COHERENT:
        return 'coherent({re}{sign}{im}i)'.format(re=_fmt(spec.value.real),
                                                  sign='-' if spec.value.imag < 0 else '+',
                                                  im=_fmt(abs(spec.value.imag)))
    if spec.kind == NUMBER_DIAGONAL:
        return 'diag({values})'.format(values=', '.join(_fmt(p) for p in spec.value))
    if spec.kind == MIXTURE:
        return 'mix({items})'.format(items=', '.join(
                '{w}: {c}'.format(w=_fmt(weight), c=format_state_spec(component))
                for weight, component in spec.components))
    return '{kind}({val})'.format(kind=spec.kind, val=_fmt(spec.value))
