"""
Parity-check detector built from a polarizing beam splitter, two Kerr media
of opposite sign and an X-quadrature readout of the probe beam.

The probe is reduced to its phase: a photon pair routed HH picks up
+theta, VV picks up -theta (or the reverse, see ``ProbeModel.hh_phase_sign``)
and mixed pairs pick up nothing. The X quadrature only resolves |phase|,
so the detector separates the even span {HH, VV} from the odd span
{HV, VH} without disturbing amplitudes inside either span.
"""
import enum
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from .statevector import PureState, _frozen
from ..modeling._base import ProbeModel
from ..modeling._const import H, V


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    def flipped(self) -> "Parity":
        return Parity.ODD if self == Parity.EVEN else Parity.EVEN


class PhaseClass(str, enum.Enum):
    THETA = "theta"
    ZERO = "zero"


@dataclass(frozen=True)
class ParityOutcome:
    parity: Parity
    phase_class: PhaseClass
    # label announced by the detector; differs from parity on a misread
    reported: Optional[Parity] = None

    def __post_init__(self):
        expected = PhaseClass.THETA if self.parity == Parity.EVEN else PhaseClass.ZERO
        if self.phase_class != expected:
            raise ValueError(
                f"{self.parity.value} parity is inconsistent with phase class {self.phase_class.value}"
            )
        if self.reported is None:
            object.__setattr__(self, "reported", self.parity)

    @property
    def misread(self) -> bool:
        return self.reported != self.parity

    @classmethod
    def of(cls, parity: Parity, reported: Optional[Parity] = None) -> "ParityOutcome":
        phase_class = PhaseClass.THETA if parity == Parity.EVEN else PhaseClass.ZERO
        return cls(parity=parity, phase_class=phase_class, reported=reported)


@dataclass(frozen=True)
class PCDResult:
    outcome: ParityOutcome
    probability: float
    state: PureState


def probe_phase(pair_labels: Tuple[str, str], model: ProbeModel) -> float:
    first, second = pair_labels
    if first == second == H:
        return model.hh_phase_sign * model.theta
    if first == second == V:
        return -model.hh_phase_sign * model.theta
    return 0.0


def _resolves_theta(magnitude, theta: float):
    # +-theta and 0 are the only phases the probe can carry
    return magnitude > theta / 2


def x_quadrature_class(signed_phase: float, model: ProbeModel) -> PhaseClass:
    """Class seen by the X-quadrature readout, which only resolves |phase|."""
    if _resolves_theta(abs(signed_phase), model.theta):
        return PhaseClass.THETA
    return PhaseClass.ZERO


def _phase_register(state: PureState, qubit_i: int, qubit_j: int, model: ProbeModel) -> np.ndarray:
    """Signed probe phase picked up by every basis ket of ``state``."""
    n = state.photon_count
    for q in (qubit_i, qubit_j):
        if not (0 <= q < n):
            raise IndexError(f"qubit {q} out of range for a register of {n} photons")
    if qubit_i == qubit_j:
        raise ValueError("parity check needs two distinct photons")
    index = np.arange(state.dimension)
    bit_i = (index >> (n - 1 - qubit_i)) & 1
    bit_j = (index >> (n - 1 - qubit_j)) & 1
    phases = np.empty(state.dimension)
    for label_i, first in enumerate((H, V)):
        for label_j, second in enumerate((H, V)):
            phases[(bit_i == label_i) & (bit_j == label_j)] = probe_phase((first, second), model)
    return phases


def _even_mask(state: PureState, qubit_i: int, qubit_j: int, model: ProbeModel) -> np.ndarray:
    phases = _phase_register(state, qubit_i, qubit_j, model)
    return _resolves_theta(np.abs(phases), model.theta)


def pcd_probabilities(
    state: PureState, qubit_i: int, qubit_j: int, model: Optional[ProbeModel] = None
) -> Tuple[float, float]:
    model = model or ProbeModel()
    even = _even_mask(state, qubit_i, qubit_j, model)
    probabilities = state.probabilities()
    p_even = float(probabilities[even].sum())
    p_odd = float(probabilities[~even].sum())
    return p_even, p_odd


def pcd_branches(
    state: PureState, qubit_i: int, qubit_j: int, model: ProbeModel
) -> Dict[Parity, Tuple[float, Optional[PureState]]]:
    """Both parity branches with their probabilities; empty branches map to None."""
    even = _even_mask(state, qubit_i, qubit_j, model)
    branches = {}
    for parity, mask in ((Parity.EVEN, even), (Parity.ODD, ~even)):
        projected = np.where(mask, state.amplitudes, 0)
        probability = float(np.vdot(projected, projected).real)
        post = None
        if probability > 0:
            post = PureState(_frozen(projected / np.sqrt(probability)), state.photon_count)
        branches[parity] = (probability, post)
    return branches


def pcd_measure(
    state: PureState,
    qubit_i: int,
    qubit_j: int,
    model: ProbeModel,
    random: float,
    flip_random: float = 1.0,
) -> PCDResult:
    """Nondestructive parity check of photons ``qubit_i`` and ``qubit_j``.

    ``random`` selects the branch (even when below p_even); the reported label
    is flipped when ``flip_random`` falls below the model's misclassification
    probability. The projection always follows the true parity.
    """
    branches = pcd_branches(state, qubit_i, qubit_j, model)
    p_even = branches[Parity.EVEN][0]
    parity = Parity.EVEN if random < p_even else Parity.ODD
    probability, post = branches[parity]
    assert post is not None, f"selected {parity.value} branch has zero amplitude"
    outcome = ParityOutcome.of(parity)
    if flip_random < model.misclassification_probability:
        outcome = replace(outcome, reported=parity.flipped())
        logger.debug(f"parity {parity.value} misread as {outcome.reported.value}")
    return PCDResult(outcome=outcome, probability=probability, state=post)
