"""
Exhaustive enumeration of every measurement branch of the iterated
protocol. Each round expands the same leaves ``round_statevector`` samples
from, with their exact weights.
"""
from dataclasses import dataclass, field
from typing import List, Optional

from loguru import logger

from ..core.ecp import Verdict, failure_coefficients, round_branches
from ..core.pcd import Parity
from ..core.statevector import PureState, fidelity, ghz_state
from ..modeling._base import ProbeModel, SchmidtCoefficients


@dataclass(frozen=True)
class EnumeratedBranch:
    probability: float
    verdict: Verdict
    round_index: int
    parity: Parity
    reported: Parity
    state: PureState
    coefficients: SchmidtCoefficients
    ghz_fidelity: float


@dataclass
class EnumerationResult:
    coefficients: SchmidtCoefficients
    n_rounds: int
    n_photons: int
    branches: List[EnumeratedBranch] = field(default_factory=list)

    @property
    def success_probability(self) -> float:
        return sum(b.probability for b in self.branches if b.verdict == Verdict.SUCCESS)

    @property
    def failure_probability(self) -> float:
        return sum(
            b.probability
            for b in self.branches
            if b.verdict == Verdict.FAILURE and b.round_index == self.n_rounds
        )

    def success_by_round(self) -> List[float]:
        totals = [0.0] * self.n_rounds
        for b in self.branches:
            if b.verdict == Verdict.SUCCESS:
                totals[b.round_index - 1] += b.probability
        return totals

    def successes(self) -> List[EnumeratedBranch]:
        return [b for b in self.branches if b.verdict == Verdict.SUCCESS]

    def failures(self, round_index: Optional[int] = None) -> List[EnumeratedBranch]:
        round_index = round_index or self.n_rounds
        return [
            b for b in self.branches if b.verdict == Verdict.FAILURE and b.round_index == round_index
        ]


def _expand(result, state, c, weight, round_index, model, target):
    for leaf in round_branches(state, 0, c, model):
        probability = weight * leaf.probability
        result.branches.append(
            EnumeratedBranch(
                probability=probability,
                verdict=leaf.verdict,
                round_index=round_index,
                parity=leaf.parity.parity,
                reported=leaf.parity.reported,
                state=leaf.state,
                coefficients=c,
                ghz_fidelity=fidelity(leaf.state, target),
            )
        )
        if leaf.verdict == Verdict.FAILURE and round_index < result.n_rounds:
            _expand(
                result,
                leaf.state,
                failure_coefficients(c),
                probability,
                round_index + 1,
                model,
                target,
            )


def enumerate_protocol(
    c: SchmidtCoefficients,
    n_rounds: int,
    n_photons: int = 2,
    model: Optional[ProbeModel] = None,
) -> EnumerationResult:
    """All branches of up to ``n_rounds`` rounds, with their exact probabilities.

    Failure branches of earlier rounds are kept as intermediate nodes; only
    those of the last round are terminal.
    """
    if n_rounds < 1:
        raise ValueError(f"n_rounds must be >= 1. Got {n_rounds}")
    if n_photons < 2:
        raise ValueError(f"a GHZ-class state needs at least 2 photons. Got {n_photons}")
    model = model or ProbeModel()
    result = EnumerationResult(coefficients=c, n_rounds=n_rounds, n_photons=n_photons)
    _expand(result, ghz_state(n_photons, c.a, c.b), c, 1.0, 1, model, ghz_state(n_photons))
    logger.debug(
        f"enumerated {len(result.branches)} branches for {c}, n={n_rounds}, N={n_photons}: "
        f"p_success={result.success_probability:.15f}"
    )
    return result
