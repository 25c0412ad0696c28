"""
Closed-form success probabilities of iterated concentration and the
pairwise baselines it is compared against.
"""
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from loguru import logger

from .ecp import failure_coefficients, round_exact
from ..modeling._base import SchmidtCoefficients
from ..modeling._const import DEFAULT_ROUNDS


@dataclass
class ConcentrationReport:
    coefficients: SchmidtCoefficients
    increments: List[float] = field(default_factory=list)
    cumulative: List[float] = field(default_factory=list)
    trajectory: List[Tuple[float, float]] = field(default_factory=list)
    # natural log of each increment; -inf only when the increment is exactly zero
    log_increments: List[float] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.increments)

    @property
    def total(self) -> float:
        return self.cumulative[-1] if self.cumulative else 0.0


@dataclass(frozen=True)
class ComparisonPoint:
    entanglement: float
    p_o: float
    p_z: float
    p_s: float
    p_b: float

    def to_dict(self):
        return {"E": self.entanglement, "P_O": self.p_o, "P_Z": self.p_z, "P_S": self.p_s, "P_B": self.p_b}


def entanglement(c: SchmidtCoefficients) -> float:
    return 2 * min(c.a2, c.b2)


def coefficient_trajectory(c: SchmidtCoefficients, n: int) -> List[SchmidtCoefficients]:
    """(a_k, b_k) for k = 1..n, the coefficients entering each round."""
    trajectory = [c]
    for _ in range(n - 1):
        trajectory.append(failure_coefficients(trajectory[-1]))
    return trajectory


def total_success_probability(c: SchmidtCoefficients, n: int = DEFAULT_ROUNDS) -> float:
    """P_n = 2a^2b^2 + (a^4 + b^4) P_{n-1}(a', b'), with P_0 = 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1. Got {n}")
    total = 0.0
    for level in reversed(coefficient_trajectory(c, n)):
        distribution = round_exact(level)
        total = distribution.success_probability + distribution.failure_probability * total
    return total


def _log_levels(c: SchmidtCoefficients, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """log a_k^2 and log b_k^2 of the normalized recursion, free of underflow."""
    log_a2 = np.empty(n)
    log_b2 = np.empty(n)
    with np.errstate(divide="ignore"):
        la, lb = np.log(c.a2), np.log(c.b2)
    for k in range(n):
        log_a2[k], log_b2[k] = la, lb
        if np.isneginf(la) or np.isneginf(lb):
            continue
        log_norm = np.logaddexp(2 * la, 2 * lb)
        la, lb = 2 * la - log_norm, 2 * lb - log_norm
    return log_a2, log_b2


def concentration_report(c: SchmidtCoefficients, n: int = DEFAULT_ROUNDS) -> ConcentrationReport:
    if n < 1:
        raise ValueError(f"n must be >= 1. Got {n}")
    report = ConcentrationReport(coefficients=c)
    log_a2, log_b2 = _log_levels(c, n)
    reach, log_reach, total = 1.0, 0.0, 0.0
    for k, level in enumerate(coefficient_trajectory(c, n)):
        distribution = round_exact(level)
        increment = reach * distribution.success_probability
        total += increment
        report.trajectory.append((level.a, level.b))
        report.increments.append(increment)
        report.cumulative.append(total)
        report.log_increments.append(float(math.log(2) + log_a2[k] + log_b2[k] + log_reach))
        reach *= distribution.failure_probability
        if np.isfinite(log_a2[k]) and np.isfinite(log_b2[k]):
            log_reach += float(np.logaddexp(2 * log_a2[k], 2 * log_b2[k]))
    return report


def eq8_literal(c: SchmidtCoefficients, n: int = DEFAULT_ROUNDS) -> float:
    """Term-by-term sum over unnormalized powers of the initial coefficients.

    P_n = 2 sum_{k=1..n} a^(2^k) b^(2^k) / prod_{j=1..k} (a^(2^j) + b^(2^j)),
    evaluated in the log domain so that high powers do not underflow.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1. Got {n}")
    with np.errstate(divide="ignore"):
        log_a2, log_b2 = np.log(c.a2), np.log(c.b2)
    total, log_denominator = 0.0, 0.0
    for k in range(1, n + 1):
        power = 2.0 ** (k - 1)
        log_denominator += np.logaddexp(power * log_a2, power * log_b2)
        log_numerator = power * (log_a2 + log_b2)
        total += math.exp(log_numerator - log_denominator) if np.isfinite(log_numerator) else 0.0
    return 2 * total


def schmidt_projection_yield(c: SchmidtCoefficients, n: int = DEFAULT_ROUNDS) -> float:
    """Per-system yield of iterated pairwise Schmidt projection.

    Y_k = a^2 b^2 + ((a^4 + b^4) / 2) Y_{k-1}(a', b'), Y_0 = 0: two systems
    are consumed per attempt and a failed attempt returns one system.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1. Got {n}")
    total = 0.0
    for level in reversed(coefficient_trajectory(c, n)):
        distribution = round_exact(level)
        total = distribution.success_probability / 2 + distribution.failure_probability / 2 * total
    return total


def comparison_curves(c: SchmidtCoefficients, n: int = DEFAULT_ROUNDS) -> ComparisonPoint:
    return ComparisonPoint(
        entanglement=entanglement(c),
        p_o=total_success_probability(c, n),
        p_z=c.a2 * c.b2,
        p_s=schmidt_projection_yield(c, n),
        p_b=min(c.a2, c.b2),
    )


def required_rounds(c: SchmidtCoefficients, tolerance: float, max_rounds: int = 64) -> int:
    """Smallest n with E - P_n <= tolerance."""
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive. Got {tolerance}")
    target = entanglement(c)
    report = concentration_report(c, max_rounds)
    for n, p in enumerate(report.cumulative, start=1):
        if target - p <= tolerance:
            return n
    logger.warning(f"gap {target - report.total} still above {tolerance} after {max_rounds} rounds")
    raise ValueError(f"{c} does not reach tolerance {tolerance} within {max_rounds} rounds")


def coefficients_from_entanglement(e: float) -> SchmidtCoefficients:
    """a = sqrt(E/2) and b = sqrt(1 - E/2), the |a| <= |b| branch."""
    return SchmidtCoefficients.from_entanglement(e)
