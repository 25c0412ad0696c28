"""
Dense pure-state register of polarization qubits.

Basis kets are encoded H -> 0, V -> 1, big-endian by photon index, so photon
0 is the most significant bit of the amplitude index. All states are
immutable; every operation returns a new state.
"""
import enum
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from loguru import logger

from ..modeling._const import TOLERANCE, MAX_PHOTON_COUNT, POLARIZATIONS, H, V

DTYPE = np.complex128


def basis_index(labels: Sequence[str]) -> int:
    index = 0
    for label in labels:
        if label not in POLARIZATIONS:
            raise ValueError(f"polarization must be one of {POLARIZATIONS}. Got {label}")
        index = (index << 1) | (1 if label == V else 0)
    return index


def basis_labels(index: int, photon_count: int) -> Tuple[str, ...]:
    if not (0 <= index < (1 << photon_count)):
        raise ValueError(f"basis index {index} out of range for {photon_count} photons")
    return tuple(
        V if (index >> (photon_count - 1 - k)) & 1 else H for k in range(photon_count)
    )


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=DTYPE)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    photon_count: int

    def __post_init__(self):
        if self.photon_count > MAX_PHOTON_COUNT:
            raise ValueError(
                f"register of {self.photon_count} photons exceeds the maximum of {MAX_PHOTON_COUNT}"
            )
        if self.amplitudes.shape != (1 << self.photon_count,):
            raise ValueError(
                f"expected {1 << self.photon_count} amplitudes, got shape {self.amplitudes.shape}"
            )
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > TOLERANCE:
            raise ValueError(f"state is not normalized (squared norm {norm})")

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = True) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=DTYPE).reshape(-1)
        dim = amplitudes.shape[0]
        if dim == 0 or dim & (dim - 1):
            raise ValueError(f"amplitude vector length must be a power of two. Got {dim}")
        photon_count = dim.bit_length() - 1
        if photon_count > MAX_PHOTON_COUNT:
            raise ValueError(
                f"register of {photon_count} photons exceeds the maximum of {MAX_PHOTON_COUNT}"
            )
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise ValueError("the zero vector is not a valid state")
        if normalize:
            amplitudes = amplitudes / norm
        return cls(_frozen(amplitudes), photon_count)

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "PureState":
        amplitudes = np.zeros(1 << len(labels), dtype=DTYPE)
        amplitudes[basis_index(labels)] = 1
        return cls.from_amplitudes(amplitudes)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.photon_count)

    def amplitude(self, labels: Sequence[str]) -> complex:
        return complex(self.amplitudes[basis_index(labels)])

    def __repr__(self):
        terms = [
            f"({amp:+.5f})|{''.join(basis_labels(idx, self.photon_count))}>"
            for idx, amp in enumerate(self.amplitudes)
            if abs(amp) > 1e-9
        ]
        return f"PureState(n={self.photon_count}, " + " ".join(terms) + ")"


@dataclass(frozen=True, eq=False)
class SingleQubitUnitary:
    matrix: np.ndarray
    name: str = field(default="U")

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=DTYPE)
        if matrix.shape != (2, 2):
            raise ValueError(f"single-qubit unitary must be 2x2. Got {matrix.shape}")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(2), rtol=0, atol=TOLERANCE):
            raise ValueError(f"{self.name} is not unitary")
        object.__setattr__(self, "matrix", _frozen(matrix))


class Projection(str, enum.Enum):
    PARALLEL = "v"
    ORTHOGONAL = "v_perp"


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    v: np.ndarray
    v_perp: np.ndarray
    name: str = field(default="basis")

    def __post_init__(self):
        v = np.asarray(self.v, dtype=DTYPE).reshape(2)
        v_perp = np.asarray(self.v_perp, dtype=DTYPE).reshape(2)
        gram = np.array(
            [[np.vdot(v, v), np.vdot(v, v_perp)], [np.vdot(v_perp, v), np.vdot(v_perp, v_perp)]]
        )
        if not np.allclose(gram, np.eye(2), rtol=0, atol=TOLERANCE):
            raise ValueError(f"{self.name} vectors are not orthonormal")
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "v_perp", _frozen(v_perp))

    def vector(self, outcome: Projection) -> np.ndarray:
        return self.v if outcome == Projection.PARALLEL else self.v_perp


@dataclass(frozen=True)
class MeasurementResult:
    outcome: Projection
    probability: float
    state: PureState


_SQRT_HALF = 1 / np.sqrt(2)

IDENTITY = SingleQubitUnitary(np.eye(2), name="I")
# sigma_x = |H><V| + |V><H|
PAULI_X = SingleQubitUnitary(np.array([[0, 1], [1, 0]]), name="X")
PAULI_Z = SingleQubitUnitary(np.array([[1, 0], [0, -1]]), name="Z")
HADAMARD = SingleQubitUnitary(_SQRT_HALF * np.array([[1, 1], [1, -1]]), name="Hadamard")

COMPUTATIONAL_BASIS = MeasurementBasis([1, 0], [0, 1], name="H/V")
DIAGONAL_BASIS = MeasurementBasis(
    [_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF], name="+/-"
)


def _check_qubit(state: PureState, qubit: int):
    if not (0 <= qubit < state.photon_count):
        raise IndexError(
            f"qubit {qubit} out of range for a register of {state.photon_count} photons"
        )


def tensor(left: PureState, right: PureState) -> PureState:
    photon_count = left.photon_count + right.photon_count
    if photon_count > MAX_PHOTON_COUNT:
        raise ValueError(
            f"tensor product of {photon_count} photons exceeds the maximum of {MAX_PHOTON_COUNT}"
        )
    return PureState(_frozen(np.kron(left.amplitudes, right.amplitudes)), photon_count)


def apply_unitary(state: PureState, qubit: int, u: SingleQubitUnitary) -> PureState:
    _check_qubit(state, qubit)
    psi = np.moveaxis(state.tensor_view(), qubit, 0)
    psi = np.tensordot(u.matrix, psi, axes=([1], [0]))
    psi = np.moveaxis(psi, 0, qubit)
    return PureState(_frozen(psi.reshape(-1)), state.photon_count)


def project(state: PureState, qubit: int, vector: np.ndarray) -> Tuple[float, np.ndarray]:
    """Contract ``qubit`` with <vector|.

    Returns the branch probability and the unnormalized amplitudes of the
    remaining register (the measured photon is removed).
    """
    _check_qubit(state, qubit)
    psi = np.moveaxis(state.tensor_view(), qubit, 0).reshape(2, -1)
    remaining = np.conj(vector) @ psi
    return float(np.vdot(remaining, remaining).real), remaining


def branch_probabilities(
    state: PureState, qubit: int, basis: MeasurementBasis
) -> Tuple[float, float]:
    p_v, _ = project(state, qubit, basis.v)
    p_perp, _ = project(state, qubit, basis.v_perp)
    return p_v, p_perp


def collapse(state: PureState, qubit: int, basis: MeasurementBasis, outcome: Projection) -> MeasurementResult:
    """Deterministic branch of a destructive single-photon measurement."""
    probability, remaining = project(state, qubit, basis.vector(outcome))
    assert probability > 0, f"selected branch {outcome.value} has zero norm"
    post = PureState(_frozen(remaining / np.sqrt(probability)), state.photon_count - 1)
    return MeasurementResult(outcome=outcome, probability=probability, state=post)


def measure_qubit(
    state: PureState, qubit: int, basis: MeasurementBasis, random: float
) -> MeasurementResult:
    """Measure ``qubit`` in ``basis``; the draw selects v when it falls below p(v)."""
    p_v, _ = branch_probabilities(state, qubit, basis)
    outcome = Projection.PARALLEL if random < p_v else Projection.ORTHOGONAL
    result = collapse(state, qubit, basis, outcome)
    logger.debug(
        f"measured qubit {qubit} in {basis.name}: {outcome.value} (p={result.probability:.6f})"
    )
    return result


def fidelity(state: PureState, target: PureState) -> float:
    if state.dimension != target.dimension:
        raise ValueError(
            f"cannot compare states of dimension {state.dimension} and {target.dimension}"
        )
    overlap = np.vdot(target.amplitudes, state.amplitudes)
    return float(min(1.0, abs(overlap) ** 2))


def ghz_state(photon_count: int, a: float = _SQRT_HALF, b: float = _SQRT_HALF) -> PureState:
    """a|H...H> + b|V...V> over ``photon_count`` photons."""
    if photon_count < 1:
        raise ValueError(f"photon_count must be >= 1. Got {photon_count}")
    if photon_count > MAX_PHOTON_COUNT:
        raise ValueError(
            f"register of {photon_count} photons exceeds the maximum of {MAX_PHOTON_COUNT}"
        )
    amplitudes = np.zeros(1 << photon_count, dtype=DTYPE)
    amplitudes[0] = a
    amplitudes[-1] = b
    return PureState.from_amplitudes(amplitudes)
