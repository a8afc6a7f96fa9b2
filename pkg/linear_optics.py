"""
Passive linear-optical networks and their lift to the truncated Fock space.

Convention: a ModeUnitary u maps input annihilation operators to outputs,
a_out_i = sum_j u_ij a_in_j. Column j therefore lists where the photons of
input j go (U a_j^dagger U^dagger = sum_i u_ij a_i^dagger), and the lifted
Fock unitary U_F acts on states as rho -> U_F rho U_F^dagger.
"""
import functools
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import block_diag, dft, polar

import config as cfg
from fock_core import (
    ModeIndexException,
    PhotonCountDistribution,
    QuantumState,
    SpaceMismatchException,
    closed_space,
    embed_state,
    photon_number_sectors,
    support_photon_number,
)


class NonUnitaryException(Exception):
    """A mode matrix that is not unitary."""


@dataclass(frozen=True, eq=False)
class ModeUnitary(object):
    """Unitary acting on mode annihilation operators, with output and input labels."""

    matrix: np.ndarray
    mode_labels: Tuple[str, ...] = ()
    input_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NonUnitaryException('Mode matrix of shape {shape} is not square.'.format(shape=matrix.shape))
        size = matrix.shape[0]
        residual = np.linalg.norm(matrix.conj().T @ matrix - np.eye(size))
        if residual > cfg.UNITARITY_TOLERANCE:
            raise NonUnitaryException('Mode matrix is not unitary (residual {res:.3e}).'.format(res=residual))
        labels = tuple(self.mode_labels) or tuple(str(i) for i in range(size))
        inputs = tuple(self.input_labels) or labels
        if len(labels) != size or len(inputs) != size:
            raise SpaceMismatchException('{num} labels for a {size}-mode unitary.'.format(
                    num=len(labels), size=size))
        matrix.flags.writeable = False
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'mode_labels', labels)
        object.__setattr__(self, 'input_labels', inputs)

    @property
    def size(self):
        return self.matrix.shape[0]

    def unitarity_residual(self):
        """Frobenius norm of U^dagger U - I."""
        return float(np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(self.size)))

    def index_of(self, label):
        """Output index of a mode label."""
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise SpaceMismatchException('No output mode labelled \'{label}\'.'.format(label=label))

    def __matmul__(self, other):
        """Network applying other first, then self."""
        if other.size != self.size:
            raise SpaceMismatchException('Cannot compose a {a}-mode and a {b}-mode network.'.format(
                    a=self.size, b=other.size))
        return ModeUnitary(self.matrix @ other.matrix, self.mode_labels, other.input_labels)

    def __str__(self):
        width = max(len(label) for label in self.mode_labels)
        rows = []
        for label, row in zip(self.mode_labels, self.matrix):
            entries = '  '.join('{re:+.6f}{im:+.6f}i'.format(re=z.real, im=z.imag) for z in row)
            rows.append('{label:>{width}} | {entries}'.format(label=label, width=width, entries=entries))
        return '\n'.join(rows)


def identity_network(n):
    """Identity on n modes."""
    return ModeUnitary(np.eye(n))


def hbs():
    """
    Half beamsplitter a_C = (a_A - a_B)/sqrt(2), a_D = (a_A + a_B)/sqrt(2).

    :return: ModeUnitary
    """
    return ModeUnitary(np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0), ('C', 'D'), ('A', 'B'))


def balanced_multiport(n):
    """
    Balanced 2 -> n multiport: the n-point DFT, inputs A and B on ports 0 and 1.

    Every output receives |amplitude|^2 = 1/n from each input. For n = 2 the
    entries have the same moduli as hbs().

    :param n: int
        Number of ports, at least 2.
    :return: ModeUnitary
    """
    if int(n) != n or n < 2:
        raise ValueError('A balanced multiport needs n >= 2 ports, got {n}.'.format(n=n))
    inputs = ('A', 'B') + tuple('vac{j}'.format(j=j) for j in range(2, n))
    return ModeUnitary(dft(int(n), scale='sqrtn'), tuple('out{j}'.format(j=j) for j in range(n)), inputs)


def phase_shifter(mode, theta, n):
    """
    Diagonal unitary with exp(i theta) on one mode.

    :param mode: int
    :param theta: float
        Phase in radians.
    :param n: int
        Total number of modes.
    :return: ModeUnitary
    """
    if int(mode) != mode or not 0 <= mode < n:
        raise ModeIndexException('Mode {mode} out of range for {n} modes.'.format(mode=mode, n=n))
    phases = np.ones(n, dtype=complex)
    phases[int(mode)] = np.exp(1j * theta)
    return ModeUnitary(np.diag(phases))


def internal_rotation(chi, n=4, modes=(2, 3)):
    """
    Rotation of one internal mode pair, u -> cos(chi) u + sin(chi) v.

    :param chi: float
    :param n: int
    :param modes: tuple
        The (u, v) mode indices.
    :return: ModeUnitary
    """
    u, v = modes
    matrix = np.eye(n, dtype=complex)
    matrix[u, u] = matrix[v, v] = math.cos(chi)
    matrix[v, u] = math.sin(chi)
    matrix[u, v] = -math.sin(chi)
    return ModeUnitary(matrix)


INTERNAL_LABELS = ('u', 'v')
DISTINGUISHABILITY_INPUTS = ('A_u', 'A_v', 'B_u', 'B_v')
DISTINGUISHABILITY_OUTPUTS = ('C_u', 'C_v', 'D_u', 'D_v')


def spatial_hbs(internal_modes=2):
    """
    HBS acting identically on every internal label of each spatial mode.

    Mode order is spatial-major: (A_u, A_v, B_u, B_v) -> (C_u, C_v, D_u, D_v).

    :param internal_modes: int
    :return: ModeUnitary
    """
    labels = INTERNAL_LABELS if internal_modes == 2 else tuple('i{j}'.format(j=j) for j in range(internal_modes))
    return ModeUnitary(np.kron(hbs().matrix, np.eye(internal_modes)),
                       tuple('{s}_{i}'.format(s=s, i=i) for s in 'CD' for i in labels),
                       tuple('{s}_{i}'.format(s=s, i=i) for s in 'AB' for i in labels))


def hbs_doubling_network(n):
    """
    Balanced 2 -> n multiport followed by an HBS on every output port.

    Port j feeds detectors j ('d<j>a') and n + j ('d<j>b'); modes n..2n-1 enter
    in vacuum.

    :param n: int
    :return: ModeUnitary
    """
    multiport = balanced_multiport(n)
    split = np.zeros((2 * n, 2 * n))
    for j in range(n):
        split[j, j] = split[n + j, j] = split[n + j, n + j] = 1.0 / math.sqrt(2.0)
        split[j, n + j] = -1.0 / math.sqrt(2.0)
    labels = tuple('d{j}a'.format(j=j) for j in range(n)) + tuple('d{j}b'.format(j=j) for j in range(n))
    inputs = multiport.input_labels + tuple('anc{j}'.format(j=j) for j in range(n))
    return ModeUnitary(split @ block_diag(multiport.matrix, np.eye(n)), labels, inputs)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _sector_block(matrix, states, previous_states, previous_block):
    """Induced action on the full sector of `states` from the one below it."""
    num_modes = matrix.shape[0]
    previous_index = {state: i for i, state in enumerate(map(tuple, previous_states))}
    current_index = {state: i for i, state in enumerate(map(tuple, states))}
    creations = np.zeros((num_modes, len(states), len(previous_states)))
    for col, state in enumerate(map(tuple, previous_states)):
        for mode in range(num_modes):
            raised = state[:mode] + (state[mode] + 1,) + state[mode + 1:]
            creations[mode, current_index[raised], col] = math.sqrt(state[mode] + 1)
    block = np.zeros((len(states), len(states)), dtype=complex)
    first_occupied = np.argmax(states > 0, axis=1)
    for mode in range(num_modes):
        cols = np.flatnonzero(first_occupied == mode)
        if not len(cols):
            continue
        lowered = states[cols].copy()
        lowered[:, mode] -= 1
        previous_cols = [previous_index[tuple(state)] for state in lowered]
        creation = np.tensordot(matrix[:, mode], creations, axes=1)
        block[:, cols] = creation @ previous_block[:, previous_cols] / np.sqrt(states[cols, mode])
    return block


def _lift(key, size, space):
    matrix = np.frombuffer(key, dtype=complex).reshape(size, size)
    lifted = np.zeros((space.dimension, space.dimension), dtype=complex)
    states = np.zeros((1, size), dtype=np.int64)
    block = np.ones((1, 1), dtype=complex)
    for total, indices in sorted(photon_number_sectors(space).items()):
        while states.sum(axis=1)[0] < total:
            following = np.array(list(_compositions(int(states.sum(axis=1)[0]) + 1, size)), dtype=np.int64)
            block = _sector_block(matrix, following, states, block)
            states = following
        position = {state: i for i, state in enumerate(map(tuple, states))}
        kept = [position[tuple(state)] for state in space.basis[indices]]
        restricted = block[np.ix_(kept, kept)]
        if len(kept) < len(states):
            # Truncated sector: nearest unitary to the induced block.
            restricted = polar(restricted)[0]
        lifted[np.ix_(indices, indices)] = restricted
    lifted.flags.writeable = False
    return lifted


_cached_lift = functools.lru_cache(maxsize=16)(_lift)


def lift_to_fock(u, space):
    """
    Fock-space unitary induced by a mode unitary.

    Built sector by sector in total photon number, so the result is exactly
    block diagonal. In sectors complete in the space (every sector of a closed
    space, and every sector with at most `cutoff` photons) it satisfies
    U_F^dagger a_i U_F = sum_j u_ij a_j; sectors cut by the cutoff hold the
    polar (nearest unitary) factor of the truncated block.

    :param u: ModeUnitary
    :param space: FockSpace
    :return: numpy.ndarray
        Read-only (dim, dim) unitary, cached per (matrix, space) up to
        config.CACHED_LIFT_DIMENSION.
    """
    if u.size != space.num_modes:
        raise SpaceMismatchException('A {size}-mode network cannot act on a {num}-mode space.'.format(
                size=u.size, num=space.num_modes))
    build = _cached_lift if space.dimension <= cfg.CACHED_LIFT_DIMENSION else _lift
    return build(u.matrix.tobytes(), u.size, space)


def apply_network(state, u):
    """
    Send a state through a network.

    The state is first embedded (inputs on the first modes, vacuum elsewhere)
    into the smallest closed space of u.size modes holding its support, so
    the lifted network is exact.

    :param state: QuantumState
    :param u: ModeUnitary
    :return: QuantumState
        The output state on the closed space.
    """
    if u.size < state.space.num_modes:
        raise SpaceMismatchException('A {size}-mode network cannot take a {num}-mode state.'.format(
                size=u.size, num=state.space.num_modes))
    target = closed_space(state, num_modes=u.size)
    if state.space != target:
        state = embed_state(state, target)
    lifted = lift_to_fock(u, target)
    rho = lifted @ state.rho @ lifted.conj().T
    return QuantumState(target, (rho + rho.conj().T) / 2.0)


@functools.lru_cache(maxsize=128)
def _sector(total, size):
    """Occupations of `size` modes holding `total` photons, lexicographic, with their sort keys."""
    occupations = np.array(list(_compositions(total, size)), dtype=np.int64).reshape(-1, size)
    keys = np.ravel_multi_index(occupations.T, (total + 1,) * size)
    occupations.flags.writeable = False
    keys.flags.writeable = False
    return occupations, keys


def _sector_positions(occupations, total):
    _, keys = _sector(total, occupations.shape[1])
    return np.searchsorted(keys, np.ravel_multi_index(occupations.T, (total + 1,) * occupations.shape[1]))


def _raise_images(images, previous, column):
    """Apply sum_i column_i a_i^dagger to images over the sector `previous`."""
    total = int(previous[0].sum()) + 1
    raised_images = np.zeros((len(_sector(total, previous.shape[1])[0]), images.shape[1]), dtype=complex)
    for mode in np.flatnonzero(column):
        raised = previous.copy()
        raised[:, mode] += 1
        rows = _sector_positions(raised, total)
        raised_images[rows] += (column[mode] * np.sqrt(raised[:, mode]))[:, None] * images
    return raised_images


def _sector_images(matrix, input_modes, total, previous_images):
    """
    Output images of every input occupation with `total` photons.

    Column c holds U_F |m_c> on the output sector, for m_c the c-th
    occupation of the input modes; built from the sector below as
    |m> = b_j^dagger |m - e_j> / sqrt(m_j), j the first occupied input.
    """
    inputs, _ = _sector(total, len(input_modes))
    previous_outputs, _ = _sector(total - 1, matrix.shape[0])
    images = np.zeros((len(_sector(total, matrix.shape[0])[0]), len(inputs)), dtype=complex)
    first_occupied = np.argmax(inputs > 0, axis=1)
    for position, mode in enumerate(input_modes):
        cols = np.flatnonzero(first_occupied == position)
        if not len(cols):
            continue
        lowered = inputs[cols].copy()
        lowered[:, position] -= 1
        previous_cols = _sector_positions(lowered, total - 1)
        images[:, cols] = (_raise_images(previous_images[:, previous_cols], previous_outputs, matrix[:, mode])
                           / np.sqrt(inputs[cols, position]))
    return images


def output_distribution(state, u, input_modes=None):
    """
    Photon-count distribution behind a network.

    The network conserves photon number, so every total-photon-number sector
    of the input is sent through separately and coherences between sectors,
    which no count statistic sees, are never formed. Memory grows with the
    largest output sector instead of the full multimode space.

    :param state: QuantumState
    :param u: ModeUnitary
    :param input_modes: sequence of int
        Network input fed by each mode of the state, defaults to the first
        modes in order; the other inputs are in vacuum.
    :return: PhotonCountDistribution
        Over the output modes of u.
    """
    if input_modes is None:
        input_modes = tuple(range(state.space.num_modes))
    input_modes = tuple(input_modes)
    if len(input_modes) != state.space.num_modes or len(set(input_modes)) != len(input_modes):
        raise SpaceMismatchException('Input modes {modes} do not fit a {num}-mode state.'.format(
                modes=input_modes, num=state.space.num_modes))
    for mode in input_modes:
        if int(mode) != mode or not 0 <= mode < u.size:
            raise ModeIndexException('Input mode {mode} out of range for a {size}-mode network.'.format(
                    mode=mode, size=u.size))
    sectors = photon_number_sectors(state.space)
    populations = state.populations
    images = np.ones((1, 1), dtype=complex)
    occupations = [np.zeros((0, u.size), dtype=np.int64)]
    probabilities = [np.zeros(0)]
    for total in range(support_photon_number(state) + 1):
        if total:
            images = _sector_images(u.matrix, input_modes, total, images)
        indices = sectors.get(total)
        if indices is None or not np.any(populations[indices] > 0.0):
            continue
        chosen = images[:, _sector_positions(state.space.basis[indices], total)]
        block = state.rho[np.ix_(indices, indices)]
        occupations.append(_sector(total, u.size)[0])
        probabilities.append(np.sum((chosen @ block) * chosen.conj(), axis=1).real)
    return PhotonCountDistribution(np.concatenate(occupations), np.concatenate(probabilities))


@dataclass(frozen=True)
class DistinguishabilityAngle(object):
    """Internal-mode overlap angle: 0 indistinguishable, pi/2 perfectly distinguishable."""

    chi: float

    def __post_init__(self):
        chi = float(self.chi)
        if not 0.0 <= chi <= math.pi / 2.0 + 1e-12:
            raise ValueError('Distinguishability angle {chi} outside [0, pi/2].'.format(chi=chi))
        object.__setattr__(self, 'chi', min(chi, math.pi / 2.0))

    def __float__(self):
        return self.chi


def distinguishability_embedding(state, chi, target=None):
    """
    Place a two-mode (A, B) state on the internal modes (A_u, A_v, B_u, B_v).

    A's content goes to A_u; B's content to cos(chi) B_u + sin(chi) B_v,
    realized as an embedding in B_u followed by internal_rotation(chi).

    :param state: QuantumState
        Two-mode state.
    :param chi: float or DistinguishabilityAngle
    :param target: FockSpace
        Four-mode target space, defaults to the smallest closed one.
    :return: QuantumState
    """
    if state.space.num_modes != 2:
        raise SpaceMismatchException('The distinguishability model takes a two-mode (A, B) state.')
    angle = chi if isinstance(chi, DistinguishabilityAngle) else DistinguishabilityAngle(chi)
    if target is None:
        target = closed_space(state, num_modes=4)
    elif target.num_modes != 4:
        raise SpaceMismatchException('The distinguishability model needs a four-mode target space.')
    embedded = embed_state(state, target, mode_map=(0, 2))
    lifted = lift_to_fock(internal_rotation(angle.chi), target)
    rho = lifted @ embedded.rho @ lifted.conj().T
    return QuantumState(target, (rho + rho.conj().T) / 2.0)
