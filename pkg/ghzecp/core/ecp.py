"""
Concentration rounds on GHZ-class states a|H...H> + b|V...V>.

One round: Alice adds an ancilla |+>, parity-checks it against her photon,
undoes the odd branch with sigma_x on the ancilla and measures the ancilla
in {a|H> - b|V>, b|H> + a|V>}. The v_perp outcome leaves the N photons in
the GHZ state; the v outcome leaves a^2|H..H> - b^2|V..V>, which is fed to the
next round with renormalized coefficients.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from .pcd import Parity, ParityOutcome, pcd_branches, pcd_measure
from .statevector import (
    DIAGONAL_BASIS,
    IDENTITY,
    PAULI_X,
    PAULI_Z,
    MeasurementBasis,
    Projection,
    PureState,
    apply_unitary,
    collapse,
    fidelity,
    ghz_state,
    measure_qubit,
    project,
    tensor,
)
from ..modeling._base import ProbeModel, SchmidtCoefficients
from ..modeling._const import DEBUG, TOLERANCE


class Verdict(str, enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class ProjectionBasis:
    basis: MeasurementBasis
    angle: float
    coefficients: SchmidtCoefficients

    def __post_init__(self):
        a, b = self.coefficients.a, self.coefficients.b
        if abs(math.cos(self.angle) - a) > TOLERANCE or abs(math.sin(self.angle) + b) > TOLERANCE:
            raise ValueError(f"angle {self.angle} is inconsistent with ({a}, {b})")

    @property
    def v(self) -> np.ndarray:
        return self.basis.v

    @property
    def v_perp(self) -> np.ndarray:
        return self.basis.v_perp


@dataclass(frozen=True)
class RoundOutcome:
    verdict: Verdict
    success_probability: float
    failure_probability: float
    failure_coefficients: Optional[SchmidtCoefficients] = None

    def __post_init__(self):
        total = self.success_probability + self.failure_probability
        if abs(total - 1.0) > TOLERANCE:
            raise ValueError(f"branch probabilities sum to {total}")
        if (self.verdict == Verdict.FAILURE) != (self.failure_coefficients is not None):
            raise ValueError("failure coefficients are carried iff the round failed")


@dataclass(frozen=True)
class RoundDistribution:
    success: RoundOutcome
    failure: RoundOutcome

    @property
    def success_probability(self) -> float:
        return self.success.success_probability

    @property
    def failure_probability(self) -> float:
        return self.success.failure_probability

    @property
    def failure_coefficients(self) -> SchmidtCoefficients:
        return self.failure.failure_coefficients


@dataclass(frozen=True)
class RoundBranch:
    """One leaf of a round: true parity, reported label and ancilla outcome."""

    parity: ParityOutcome
    parity_probability: float
    label_probability: float
    projection: Projection
    projection_probability: float
    state: PureState

    @property
    def probability(self) -> float:
        return self.parity_probability * self.label_probability * self.projection_probability

    @property
    def verdict(self) -> Verdict:
        return Verdict.SUCCESS if self.projection == Projection.ORTHOGONAL else Verdict.FAILURE


@dataclass(frozen=True)
class RoundRecord:
    """One executed round on the state vector."""

    verdict: Verdict
    state: PureState
    coefficients: SchmidtCoefficients
    parity: ParityOutcome
    parity_probability: float
    projection: Projection
    projection_probability: float
    ghz_fidelity: float
    next_coefficients: Optional[SchmidtCoefficients] = None


@dataclass
class TrajectoryResult:
    verdict: Verdict
    rounds: List[RoundRecord] = field(default_factory=list)
    final_coefficients: Optional[SchmidtCoefficients] = None

    @property
    def success_round(self) -> Optional[int]:
        if self.verdict == Verdict.SUCCESS:
            return len(self.rounds)
        return None

    @property
    def state(self) -> PureState:
        return self.rounds[-1].state


@dataclass(frozen=True)
class GHZReduction:
    """Two-level view of an N-photon GHZ-class state.

    |H'> = |H...H> and |V'> = |V...V> over the remote photons, so the state
    reads a|H>_A|H'> + b|V>_A|V'> and the two-photon analytics apply unchanged.
    """

    n_photons: int
    alice_qubit: int
    remote_qubits: Tuple[int, ...]
    h_prime: str
    v_prime: str


@dataclass(frozen=True)
class SchmidtProjectionRecord:
    verdict: Verdict
    state: PureState
    parity: ParityOutcome
    parity_probability: float
    sign: int
    ghz_fidelity: float
    next_coefficients: Optional[SchmidtCoefficients] = None


def prepare_ancilla() -> PureState:
    return PureState.from_amplitudes([1, 1])


def projection_basis(c: SchmidtCoefficients) -> ProjectionBasis:
    v = np.array([c.a, -c.b])
    v_perp = np.array([c.b, c.a])
    basis = MeasurementBasis(v, v_perp, name=f"phi({c.a:.6f},{c.b:.6f})")
    return ProjectionBasis(basis=basis, angle=math.atan2(-c.b, c.a), coefficients=c)


def failure_coefficients(c: SchmidtCoefficients) -> SchmidtCoefficients:
    if c.is_degenerate:
        return c
    a2, b2 = c.a2, c.b2
    norm = math.sqrt(a2 * a2 + b2 * b2)
    return SchmidtCoefficients(a2 / norm, -b2 / norm)


def round_exact(c: SchmidtCoefficients) -> RoundDistribution:
    a2, b2 = c.a2, c.b2
    # (a^2 + b^2)^2 drifts twice as far from 1 as the accepted norm error
    norm = (a2 + b2) ** 2
    p_success = 2 * a2 * b2 / norm
    p_failure = (a2 * a2 + b2 * b2) / norm
    return RoundDistribution(
        success=RoundOutcome(Verdict.SUCCESS, p_success, p_failure),
        failure=RoundOutcome(Verdict.FAILURE, p_success, p_failure, failure_coefficients(c)),
    )


def ghz_reduce(n_photons: int, c: SchmidtCoefficients) -> Tuple[SchmidtCoefficients, GHZReduction]:
    if n_photons < 2:
        raise ValueError(f"a GHZ-class state needs at least 2 photons. Got {n_photons}")
    reduction = GHZReduction(
        n_photons=n_photons,
        alice_qubit=0,
        remote_qubits=tuple(range(1, n_photons)),
        h_prime="H" * (n_photons - 1),
        v_prime="V" * (n_photons - 1),
    )
    return c, reduction


def _check_consistent(state: PureState, c: SchmidtCoefficients):
    target = ghz_state(state.photon_count, c.a, c.b)
    f = fidelity(state, target)
    assert abs(f - 1) <= 1e-9, f"input state is not a|H..H> + b|V..V> for {c} (fidelity {f})"


def round_branches(
    state: PureState, alice_qubit: int, c: SchmidtCoefficients, model: ProbeModel
) -> List[RoundBranch]:
    """Every leaf of one concentration round on ``state`` with its exact weight.

    Leaves come out parity first (even, odd), the faithful label before the
    flipped one, then v before v_perp. Zero-weight leaves are dropped.
    """
    extended = tensor(state, prepare_ancilla())
    ancilla = extended.photon_count - 1
    basis = projection_basis(c).basis
    epsilon = model.misclassification_probability
    branches = []
    for parity, (p_parity, checked) in pcd_branches(extended, alice_qubit, ancilla, model).items():
        if checked is None:
            continue
        for reported, p_label in ((parity, 1 - epsilon), (parity.flipped(), epsilon)):
            if p_label == 0:
                continue
            # Alice only knows the reported label
            correction = PAULI_X if reported == Parity.ODD else IDENTITY
            corrected = apply_unitary(checked, ancilla, correction)
            for outcome in (Projection.PARALLEL, Projection.ORTHOGONAL):
                p_outcome, _ = project(corrected, ancilla, basis.vector(outcome))
                if p_outcome == 0:
                    continue
                branches.append(
                    RoundBranch(
                        parity=ParityOutcome.of(parity, reported),
                        parity_probability=p_parity,
                        label_probability=p_label,
                        projection=outcome,
                        projection_probability=p_outcome,
                        state=collapse(corrected, ancilla, basis, outcome).state,
                    )
                )
    return branches


def _select_branch(
    branches: List[RoundBranch], draws: np.ndarray, model: ProbeModel
) -> RoundBranch:
    branch_draw, flip_draw, projection_draw = draws
    p_even = next((b.parity_probability for b in branches if b.parity.parity == Parity.EVEN), 0.0)
    parity = Parity.EVEN if branch_draw < p_even else Parity.ODD
    reported = parity.flipped() if flip_draw < model.misclassification_probability else parity
    candidates = [b for b in branches if b.parity.parity == parity and b.parity.reported == reported]
    p_v = next((b.projection_probability for b in candidates if b.projection == Projection.PARALLEL), 0.0)
    outcome = Projection.PARALLEL if projection_draw < p_v else Projection.ORTHOGONAL
    selected = [b for b in candidates if b.projection == outcome]
    assert selected, f"selected leaf ({parity.value}, {reported.value}, {outcome.value}) has zero weight"
    return selected[0]


def round_statevector(
    state: PureState,
    alice_qubit: int,
    c: SchmidtCoefficients,
    model: ProbeModel,
    rng: np.random.Generator,
) -> RoundRecord:
    """Execute one concentration round on ``state``.

    Three uniform draws are consumed per round in a fixed order (branch,
    label flip, ancilla projection) so trajectories stay aligned across
    models. The draws pick one leaf of ``round_branches``.
    """
    if DEBUG:
        _check_consistent(state, c)
    branch = _select_branch(round_branches(state, alice_qubit, c, model), rng.random(3), model)
    if branch.verdict == Verdict.SUCCESS:
        next_c = None
    else:
        next_c = failure_coefficients(c)
    ghz_f = fidelity(branch.state, ghz_state(state.photon_count))
    logger.debug(
        f"round on {c}: parity={branch.parity.parity.value} reported={branch.parity.reported.value} "
        f"projection={branch.projection.value} verdict={branch.verdict.value} fidelity={ghz_f:.12f}"
    )
    return RoundRecord(
        verdict=branch.verdict,
        state=branch.state,
        coefficients=c,
        parity=branch.parity,
        parity_probability=branch.parity_probability,
        projection=branch.projection,
        projection_probability=branch.projection_probability,
        ghz_fidelity=ghz_f,
        next_coefficients=next_c,
    )


def run_trajectory(
    c: SchmidtCoefficients,
    n_rounds: int,
    n_photons: int,
    model: ProbeModel,
    rng: np.random.Generator,
    state: Optional[PureState] = None,
) -> TrajectoryResult:
    """Iterate rounds until the first success or ``n_rounds`` rounds."""
    if n_rounds < 1:
        raise ValueError(f"n_rounds must be >= 1. Got {n_rounds}")
    ghz_reduce(n_photons, c)
    if state is None:
        state = ghz_state(n_photons, c.a, c.b)
    result = TrajectoryResult(verdict=Verdict.FAILURE)
    current = c
    for _ in range(n_rounds):
        record = round_statevector(state, 0, current, model, rng)
        result.rounds.append(record)
        if record.verdict == Verdict.SUCCESS:
            result.verdict = Verdict.SUCCESS
            result.final_coefficients = None
            return result
        current = record.next_coefficients
        state = record.state
    result.final_coefficients = current
    return result


def schmidt_projection_round(
    c: SchmidtCoefficients,
    model: ProbeModel,
    rng: np.random.Generator,
    n_photons: int = 2,
) -> SchmidtProjectionRecord:
    """Pairwise concentration on two copies of the same GHZ-class state.

    Alice parity-checks her two photons. Odd parity keeps
    ab(|H..H V..V> + |V..V H..H>); measuring every photon of the second copy
    in the diagonal basis then leaves copy one in the GHZ state up to a sign
    fixed with sigma_z on Alice's photon. Even parity leaves one copy with
    coefficients proportional to (a^2, b^2), recycled for the next level.
    """
    ghz_reduce(n_photons, c)
    copy = ghz_state(n_photons, c.a, c.b)
    state = tensor(copy, copy)
    branch_draw, flip_draw = rng.random(2)
    checked = pcd_measure(state, 0, n_photons, model, branch_draw, flip_draw)
    state = checked.state
    sign = 1
    for _ in range(n_photons):
        measured = measure_qubit(state, n_photons, DIAGONAL_BASIS, rng.random())
        if measured.outcome == Projection.ORTHOGONAL:
            sign = -sign
        state = measured.state
    if sign < 0:
        state = apply_unitary(state, 0, PAULI_Z)

    if checked.outcome.reported == Parity.ODD:
        verdict, next_c = Verdict.SUCCESS, None
    else:
        verdict = Verdict.FAILURE
        recycled = failure_coefficients(c)
        next_c = SchmidtCoefficients(recycled.a, abs(recycled.b))
    return SchmidtProjectionRecord(
        verdict=verdict,
        state=state,
        parity=checked.outcome,
        parity_probability=checked.probability,
        sign=sign,
        ghz_fidelity=fidelity(state, ghz_state(n_photons)),
        next_coefficients=next_c,
    )
