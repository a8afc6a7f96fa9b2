"""
Truncated multimode Fock space with exact operator algebra.

Basis ordering: occupation vectors (n_0, ..., n_{m-1}) in lexicographic order,
mode 0 varying slowest. For an uncapped space this is numpy C order over a
(cutoff + 1,) * num_modes grid, so index = ravel_multi_index(occupation). A
capped space keeps the same order and drops the vectors whose total photon
number exceeds the cap.
"""
import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.linalg import eigvalsh

import config as cfg


class DimensionLimitException(Exception):
    """The Hilbert-space dimension exceeds the configured limit."""


class ModeIndexException(Exception):
    """A mode index is out of range for the space."""


class SpaceMismatchException(Exception):
    """Operands live on incompatible Fock spaces."""


class CutoffException(Exception):
    """A photon number is not representable below the cutoff."""


class CutoffMismatchException(Exception):
    """Two spaces cannot be combined because of their cutoffs."""


class InvalidStateException(Exception):
    """A density matrix violates the shape, trace or Hermiticity requirements."""


class NumericalToleranceException(Exception):
    """A quantity that must be real carries a significant imaginary part."""


def count_basis_states(num_modes, cutoff, max_total_photons=None):
    """
    Count the occupation vectors of a (possibly capped) truncated space.

    Python integers are used throughout, so the count never overflows.

    :param num_modes: int
    :param cutoff: int
        Maximum photon number per mode.
    :param max_total_photons: int
        Cap on the total photon number, None for no cap.
    :return: int
    """
    if max_total_photons is None or max_total_photons >= num_modes * cutoff:
        return (cutoff + 1) ** num_modes
    count = 0
    # Inclusion-exclusion over the modes forced above the cutoff.
    for j in range(num_modes + 1):
        rest = max_total_photons - j * (cutoff + 1)
        if rest < 0:
            break
        count += (-1) ** j * math.comb(num_modes, j) * math.comb(rest + num_modes, num_modes)
    return count


def _capped_occupations(num_modes, cutoff, max_total):
    if num_modes == 0:
        yield ()
        return
    for first in range(min(cutoff, max_total) + 1):
        for rest in _capped_occupations(num_modes - 1, cutoff, max_total - first):
            yield (first,) + rest


@dataclass(frozen=True)
class FockSpace(object):
    """Truncated multimode Fock space; see the module docstring for the basis ordering."""

    num_modes: int
    cutoff: int
    max_total_photons: Optional[int] = None

    @property
    def local_dimension(self):
        """Dimension of a single mode."""
        return self.cutoff + 1

    @property
    def is_capped(self):
        """Whether the total photon number is capped."""
        return self.max_total_photons is not None and self.max_total_photons < self.num_modes * self.cutoff

    @property
    def is_closed(self):
        """Whether every photon-number sector present is complete (closed under passive networks)."""
        return self.max_total_photons is not None and self.cutoff >= self.max_total_photons

    @functools.cached_property
    def dimension(self):
        """Total Hilbert-space dimension."""
        return count_basis_states(self.num_modes, self.cutoff, self.max_total_photons)

    @functools.cached_property
    def basis(self):
        """Occupation vectors, one row per basis state, in basis order."""
        if self.is_capped:
            rows = list(_capped_occupations(self.num_modes, self.cutoff, self.max_total_photons))
        else:
            rows = list(itertools.product(range(self.cutoff + 1), repeat=self.num_modes))
        basis = np.array(rows, dtype=np.int64).reshape(-1, self.num_modes)
        basis.flags.writeable = False
        return basis

    @functools.cached_property
    def total_photons(self):
        """Total photon number of every basis state."""
        totals = self.basis.sum(axis=1)
        totals.flags.writeable = False
        return totals

    @functools.cached_property
    def _keys(self):
        keys = np.ravel_multi_index(self.basis.T, (self.cutoff + 1,) * self.num_modes)
        keys.flags.writeable = False
        return keys


def build_space(num_modes, cutoff, max_total_photons=None, dimension_limit=None):
    """
    Build a truncated Fock space.

    :param num_modes: int
        Number of modes, at least 1.
    :param cutoff: int
        Maximum photon number per mode (inclusive), at least 1.
    :param max_total_photons: int
        Optional cap on the total photon number.
    :param dimension_limit: int
        Largest allowed dimension, defaults to config.MAX_HILBERT_DIMENSION.
    :return: FockSpace
    """
    if dimension_limit is None:
        dimension_limit = cfg.MAX_HILBERT_DIMENSION
    if int(num_modes) != num_modes or num_modes < 1:
        raise ValueError('num_modes must be a positive integer, got {val}.'.format(val=num_modes))
    if int(cutoff) != cutoff or cutoff < 1:
        raise ValueError('cutoff must be a positive integer, got {val}.'.format(val=cutoff))
    if max_total_photons is not None and (int(max_total_photons) != max_total_photons or max_total_photons < 0):
        raise ValueError('max_total_photons must be a nonnegative integer, got {val}.'.format(
                val=max_total_photons))
    dimension = count_basis_states(int(num_modes), int(cutoff), max_total_photons)
    if dimension > dimension_limit:
        raise DimensionLimitException(
                'Dimension {dim} of a {modes}-mode space with cutoff {cut} exceeds the limit {limit}.'.format(
                        dim=dimension, modes=num_modes, cut=cutoff, limit=dimension_limit))
    return FockSpace(int(num_modes), int(cutoff),
                     None if max_total_photons is None else int(max_total_photons))


def check_mode(space, mode):
    """
    Validate a mode index.

    :param space: FockSpace
    :param mode: int
    :return: int
    """
    if int(mode) != mode or not 0 <= mode < space.num_modes:
        raise ModeIndexException('Mode {mode} out of range for a {num}-mode space.'.format(
                mode=mode, num=space.num_modes))
    return int(mode)


def lookup_indices(space, occupations):
    """
    Find basis indices of occupation vectors.

    :param space: FockSpace
    :param occupations: array of shape (k, num_modes)
    :return: tuple
        (indices, found) where found flags the vectors present in the basis.
    """
    occupations = np.asarray(occupations, dtype=np.int64).reshape(-1, space.num_modes)
    inside = np.all((occupations >= 0) & (occupations <= space.cutoff), axis=1)
    keys = np.zeros(len(occupations), dtype=np.int64)
    if inside.any():
        keys[inside] = np.ravel_multi_index(occupations[inside].T, (space.cutoff + 1,) * space.num_modes)
    positions = np.searchsorted(space._keys, keys)
    positions = np.minimum(positions, space.dimension - 1)
    found = inside & (space._keys[positions] == keys)
    return positions, found


def occupation_to_index(space, occupation):
    """
    Convert an occupation vector to its basis index.

    :param space: FockSpace
    :param occupation: sequence of int
    :return: int
    """
    if len(occupation) != space.num_modes:
        raise SpaceMismatchException('Occupation {occ} does not match a {num}-mode space.'.format(
                occ=tuple(occupation), num=space.num_modes))
    positions, found = lookup_indices(space, [occupation])
    if not found[0]:
        raise CutoffException('Occupation {occ} is not in the truncated basis.'.format(occ=tuple(occupation)))
    return int(positions[0])


def index_to_occupation(space, index):
    """
    Convert a basis index to its occupation vector.

    :param space: FockSpace
    :param index: int
    :return: tuple
    """
    if not 0 <= index < space.dimension:
        raise IndexError('Basis index {idx} out of range for dimension {dim}.'.format(
                idx=index, dim=space.dimension))
    return tuple(int(n) for n in space.basis[index])


@functools.lru_cache(maxsize=None)
def photon_number_sectors(space):
    """
    Group basis indices by total photon number.

    :param space: FockSpace
    :return: dict
        Total photon number -> array of basis indices (in basis order).
    """
    totals = space.total_photons
    return {int(total): np.flatnonzero(totals == total) for total in np.unique(totals)}


@functools.lru_cache(maxsize=256)
def _annihilation(space, mode):
    basis = space.basis
    occupied = np.flatnonzero(basis[:, mode] > 0)
    lowered = basis[occupied].copy()
    lowered[:, mode] -= 1
    rows, _ = lookup_indices(space, lowered)
    return sparse.csr_matrix((np.sqrt(basis[occupied, mode]).astype(complex), (rows, occupied)),
                             shape=(space.dimension, space.dimension))


def annihilation_matrix(space, mode):
    """
    Matrix of the annihilation operator a_mode in the truncated basis.

    <n-1|a|n> = sqrt(n) for n <= cutoff, identity on the other modes.

    :param space: FockSpace
    :param mode: int
    :return: numpy.ndarray
        Complex matrix of shape (dim, dim).
    """
    return _annihilation(space, check_mode(space, mode)).toarray()


def creation_matrix(space, mode):
    """Matrix of a_mode^dagger, the adjoint of annihilation_matrix."""
    return annihilation_matrix(space, mode).conj().T


@dataclass(frozen=True)
class MomentRequest(object):
    """
    Normal-ordered moment <prod_i a_i^dagger^m_i prod_i a_i^n_i>.

    Creation operators stand to the left of annihilation operators.
    """

    creation_powers: Tuple[int, ...]
    annihilation_powers: Tuple[int, ...]

    def __post_init__(self):
        creation = tuple(int(p) for p in self.creation_powers)
        annihilation = tuple(int(p) for p in self.annihilation_powers)
        if len(creation) != len(annihilation):
            raise ValueError('Creation and annihilation powers must cover the same modes.')
        if any(p < 0 for p in creation + annihilation):
            raise ValueError('Moment powers must be nonnegative.')
        object.__setattr__(self, 'creation_powers', creation)
        object.__setattr__(self, 'annihilation_powers', annihilation)

    @property
    def num_modes(self):
        return len(self.creation_powers)

    @classmethod
    def on_modes(cls, num_modes, creation=None, annihilation=None):
        """
        Build a request from sparse {mode: power} mappings.

        :param num_modes: int
        :param creation: dict
        :param annihilation: dict
        :return: MomentRequest
        """
        creation_powers = [0] * num_modes
        annihilation_powers = [0] * num_modes
        for mode, power in (creation or {}).items():
            creation_powers[mode] += power
        for mode, power in (annihilation or {}).items():
            annihilation_powers[mode] += power
        return cls(tuple(creation_powers), tuple(annihilation_powers))


@dataclass(frozen=True, eq=False)
class QuantumState(object):
    """Density operator on a truncated Fock space (pure states are rank-1)."""

    space: FockSpace
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        dimension = self.space.dimension
        if rho.shape != (dimension, dimension):
            raise InvalidStateException('Density matrix of shape {shape} does not match dimension {dim}.'.format(
                    shape=rho.shape, dim=dimension))
        trace = np.trace(rho)
        if abs(trace - 1.0) > cfg.TRACE_TOLERANCE:
            raise InvalidStateException('Density matrix trace {tr} differs from one.'.format(tr=trace))
        hermiticity = np.max(np.abs(rho - rho.conj().T)) if dimension else 0.0
        if hermiticity > cfg.HERMITICITY_TOLERANCE:
            raise InvalidStateException('Density matrix is not Hermitian (deviation {dev:.3e}).'.format(
                    dev=hermiticity))
        rho.flags.writeable = False
        object.__setattr__(self, 'rho', rho)

    @classmethod
    def from_ket(cls, space, ket):
        """
        Build the rank-1 density matrix of a (normalized on the fly) state vector.

        :param space: FockSpace
        :param ket: array-like of length space.dimension
        :return: QuantumState
        """
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.vdot(ket, ket).real
        if norm <= 0.0:
            raise InvalidStateException('Cannot normalize a zero state vector.')
        ket = ket / math.sqrt(norm)
        return cls(space, np.outer(ket, ket.conj()))

    @property
    def populations(self):
        """Diagonal of rho in the number basis."""
        return self.rho.diagonal().real


def real_part(value, tolerance=None, name='moment'):
    """
    Return the real part of a value that must be real.

    :param value: complex
    :param tolerance: float
        Largest imaginary part accepted, defaults to config.IMAGINARY_TOLERANCE.
    :param name: str
        Name used in the error message.
    :return: float
    """
    if tolerance is None:
        tolerance = cfg.IMAGINARY_TOLERANCE
    value = complex(value)
    if abs(value.imag) > tolerance:
        raise NumericalToleranceException('{name} has imaginary part {imag:.3e} above {tol:.1e}.'.format(
                name=name, imag=value.imag, tol=tolerance))
    return value.real


@functools.lru_cache(maxsize=512)
def _annihilation_product(space, powers):
    product = sparse.identity(space.dimension, dtype=complex, format='csr')
    for mode, power in enumerate(powers):
        for _ in range(power):
            product = product @ _annihilation(space, mode)
    return product.tocsr()


def normal_ordered_moment(state, request):
    """
    Evaluate trace(rho prod a^dagger^m prod a^n).

    Exact up to floating point for states supported below the cutoff.

    :param state: QuantumState
    :param request: MomentRequest
    :return: complex
    """
    space = state.space
    if request.num_modes != space.num_modes:
        raise SpaceMismatchException('Moment request over {req} modes on a {num}-mode space.'.format(
                req=request.num_modes, num=space.num_modes))
    highest = max(request.creation_powers + request.annihilation_powers)
    if highest > space.cutoff:
        raise CutoffException('Moment power {p} exceeds the cutoff {cut}.'.format(p=highest, cut=space.cutoff))
    left = _annihilation_product(space, request.creation_powers)
    right = _annihilation_product(space, request.annihilation_powers)
    return complex(left.conj().multiply(right @ state.rho).sum())


def tensor_product(left, right):
    """
    Product state on the concatenated mode list (left modes first).

    :param left: QuantumState
    :param right: QuantumState
    :return: QuantumState
    """
    if left.space.cutoff != right.space.cutoff:
        raise CutoffMismatchException('Cannot combine cutoffs {a} and {b}.'.format(
                a=left.space.cutoff, b=right.space.cutoff))
    if left.space.is_capped or right.space.is_capped:
        raise SpaceMismatchException('Tensor products need uncapped spaces.')
    space = build_space(left.space.num_modes + right.space.num_modes, left.space.cutoff)
    return QuantumState(space, np.kron(left.rho, right.rho))


def mean_photon_number(state, mode):
    """
    Mean photon number <a^dagger a> of a mode.

    :param state: QuantumState
    :param mode: int
    :return: float
    """
    mode = check_mode(state.space, mode)
    request = MomentRequest.on_modes(state.space.num_modes, {mode: 1}, {mode: 1})
    return real_part(normal_ordered_moment(state, request), cfg.MEAN_PHOTON_IMAGINARY_TOLERANCE,
                     name='mean photon number')


@dataclass(frozen=True, eq=False)
class PhotonCountDistribution(object):
    """
    Joint photon-count probabilities over the modes of a space.

    Normal-ordered products of number operators are diagonal in the Fock
    basis, <n|:N^p:|n> = n! / (n - p)!, so counting statistics need only the
    populations.
    """

    occupations: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        occupations = np.array(self.occupations, dtype=np.int64)
        probabilities = np.array(self.probabilities, dtype=float)
        if occupations.ndim != 2 or len(occupations) != len(probabilities):
            raise SpaceMismatchException('{num} probabilities for occupations of shape {shape}.'.format(
                    num=len(probabilities), shape=occupations.shape))
        occupations.flags.writeable = False
        probabilities.flags.writeable = False
        object.__setattr__(self, 'occupations', occupations)
        object.__setattr__(self, 'probabilities', probabilities)

    @classmethod
    def from_state(cls, state):
        return cls(state.space.basis, state.populations)

    @property
    def num_modes(self):
        return self.occupations.shape[1]

    def _check_mode(self, mode):
        if int(mode) != mode or not 0 <= mode < self.num_modes:
            raise ModeIndexException('Mode {mode} out of range for {num} modes.'.format(
                    mode=mode, num=self.num_modes))
        return int(mode)

    def factorial_moment(self, powers):
        """
        <:prod_j N_j^p_j:> for a {mode: power} map.

        :param powers: dict
        :return: float
        """
        weights = self.probabilities
        for mode, power in powers.items():
            counts = self.occupations[:, self._check_mode(mode)]
            for step in range(power):
                weights = weights * (counts - step)
        return float(weights.sum())

    def mean_photon_number(self, mode):
        return self.factorial_moment({mode: 1})

    def coincidence(self, groups):
        """
        <:prod_g (sum_{j in g} N_j):> over detector groups.

        :param groups: sequence of sequence of int
            Each group lists the modes one detector integrates over.
        :return: float
        """
        return float(sum(self.factorial_moment(Counter(modes)) for modes in itertools.product(*groups)))


def support_photon_number(state):
    """Largest total photon number carrying nonzero population."""
    occupied = state.populations > 0.0
    if not occupied.any():
        return 0
    return int(state.space.total_photons[occupied].max())


def closed_space(state, num_modes=None):
    """
    Smallest closed space holding the support of a state.

    :param state: QuantumState
    :param num_modes: int
        Number of modes of the new space, defaults to the state's.
    :return: FockSpace
    """
    total = max(support_photon_number(state), 1)
    return build_space(num_modes or state.space.num_modes, total, total)


def embed_state(state, target, mode_map=None):
    """
    Place a state into another space, extra modes in vacuum.

    :param state: QuantumState
    :param target: FockSpace
    :param mode_map: sequence of int
        Target mode of every source mode, defaults to the first modes in order.
    :return: QuantumState
    """
    source = state.space
    if mode_map is None:
        mode_map = tuple(range(source.num_modes))
    if len(mode_map) != source.num_modes or len(set(mode_map)) != len(mode_map):
        raise SpaceMismatchException('Mode map {mm} does not fit a {num}-mode state.'.format(
                mm=tuple(mode_map), num=source.num_modes))
    for mode in mode_map:
        check_mode(target, mode)
    support = np.flatnonzero(state.populations > 0.0)
    occupations = np.zeros((len(support), target.num_modes), dtype=np.int64)
    occupations[:, list(mode_map)] = source.basis[support]
    indices, found = lookup_indices(target, occupations)
    if not found.all():
        raise CutoffMismatchException(
                'State support up to {n} photons does not fit a space with cutoff {cut} and cap {cap}.'.format(
                        n=support_photon_number(state), cut=target.cutoff, cap=target.max_total_photons))
    rho = np.zeros((target.dimension, target.dimension), dtype=complex)
    rho[np.ix_(indices, indices)] = state.rho[np.ix_(support, support)]
    return QuantumState(target, rho)


@dataclass(frozen=True)
class StateDiagnostics(object):
    """Numerical health report of a QuantumState."""

    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float
    tail_mass: float
    overflow_mass: float
    tail_threshold: float

    @property
    def is_valid(self):
        return (self.trace_deviation <= cfg.TRACE_TOLERANCE
                and self.hermiticity_deviation <= cfg.HERMITICITY_TOLERANCE
                and self.min_eigenvalue >= -cfg.POSITIVITY_TOLERANCE)

    @property
    def is_cutoff_adequate(self):
        return self.tail_mass <= self.tail_threshold


def validate_state(state, tail_threshold=None):
    """
    Diagnose a state.

    tail_mass is the population of basis states with some mode at the cutoff;
    overflow_mass is the population of sectors with more photons than the cutoff,
    where a lifted network on this space is no longer exact.

    :param state: QuantumState
    :param tail_threshold: float
        Tail mass above which the cutoff is flagged, defaults to config.TAIL_MASS_THRESHOLD.
    :return: StateDiagnostics
    """
    if tail_threshold is None:
        tail_threshold = cfg.TAIL_MASS_THRESHOLD
    space = state.space
    rho = state.rho
    populations = state.populations
    at_cutoff = np.any(space.basis == space.cutoff, axis=1)
    return StateDiagnostics(
            trace_deviation=float(abs(np.trace(rho) - 1.0)),
            hermiticity_deviation=float(np.max(np.abs(rho - rho.conj().T))),
            min_eigenvalue=float(eigvalsh((rho + rho.conj().T) / 2.0)[0]),
            tail_mass=float(populations[at_cutoff].sum()),
            overflow_mass=float(populations[space.total_photons > space.cutoff].sum()),
            tail_threshold=tail_threshold)
