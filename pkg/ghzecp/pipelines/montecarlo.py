import math
from dataclasses import dataclass, field, asdict
from multiprocessing import Pool
from typing import List, Optional

import numpy as np
from loguru import logger

from ..core.ecp import (
    Verdict,
    prepare_ancilla,
    round_exact,
    run_trajectory,
    schmidt_projection_round,
)
from ..core.analytics import coefficient_trajectory
from ..core.pcd import pcd_measure
from ..core.statevector import ghz_state, tensor
from ..modeling._base import ProbeModel, SchmidtCoefficients
from ..utils.randomness import block_sizes, make_rng, make_trial_rng

sampling_methods = ["branch", "statevector"]
pool_methods = ["binomial", "statevector"]

BLOCK_SIZE = 1 << 16


@dataclass
class EnsembleStats:
    trials: int
    successes: int
    seed: int
    estimate: float = field(init=False)
    standard_error: float = field(init=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1. Got {self.trials}")
        self.estimate = self.successes / self.trials
        self.standard_error = math.sqrt(self.estimate * (1 - self.estimate) / self.trials)

    def z_score(self, analytic: float) -> float:
        """Standardized deviation from ``analytic``; 0 when both agree exactly."""
        delta = self.estimate - analytic
        if self.standard_error == 0:
            return 0.0 if delta == 0 else math.copysign(math.inf, delta)
        return delta / self.standard_error

    def to_dict(self):
        return asdict(self)


@dataclass
class PoolStats:
    systems: int
    successes: int
    seed: int
    levels: int
    batch_yields: List[float]
    pairs_per_level: List[int]
    estimate: float = field(init=False)
    standard_error: float = field(init=False)

    def __post_init__(self):
        self.estimate = self.successes / self.systems
        if len(self.batch_yields) > 1:
            spread = float(np.std(self.batch_yields, ddof=1))
            self.standard_error = spread / math.sqrt(len(self.batch_yields))
        else:
            self.standard_error = 0.0

    def to_dict(self):
        return asdict(self)


def _success_schedule(c: SchmidtCoefficients, n_rounds: int) -> np.ndarray:
    """Per-round success probability conditioned on reaching the round."""
    return np.array(
        [round_exact(level).success_probability for level in coefficient_trajectory(c, n_rounds)]
    )


def _branch_block(args) -> int:
    schedule, seed, block, size = args
    draws = make_rng(seed, block).random((size, len(schedule)))
    return int(np.any(draws < schedule, axis=1).sum())


def _statevector_block(args) -> int:
    c, n_rounds, n_photons, model, seed, first, size = args
    successes = 0
    for trial in range(first, first + size):
        result = run_trajectory(c, n_rounds, n_photons, model, make_trial_rng(seed, trial))
        successes += result.verdict == Verdict.SUCCESS
    return successes


def estimate_success(
    c: SchmidtCoefficients,
    n_rounds: int,
    trials: int,
    seed: int = 0,
    model: Optional[ProbeModel] = None,
    method: str = "branch",
    n_photons: int = 2,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> EnsembleStats:
    """Sample ``trials`` independent runs of the iterated protocol.

    ``branch`` samples the exact per-round branch distribution, vectorized per
    block that owns the substream (seed, block index); ``statevector`` executes
    every round on the state vector with the substream (seed, trial index).
    Neither result depends on ``workers``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1. Got {trials}")
    if method not in sampling_methods:
        raise ValueError(f"Unsupported sampling method: {method}, supported methods are {sampling_methods}")
    model = model or ProbeModel()
    if method == "branch" and not model.is_ideal:
        raise ValueError("branch sampling assumes an ideal detector, use method='statevector'")
    sizes = block_sizes(trials, block_size)
    if method == "branch":
        schedule = _success_schedule(c, n_rounds)
        tasks = [(schedule, seed, block, size) for block, size in enumerate(sizes)]
        worker = _branch_block
    else:
        starts = np.cumsum([0] + sizes[:-1])
        tasks = [
            (c, n_rounds, n_photons, model, seed, int(first), size) for first, size in zip(starts, sizes)
        ]
        worker = _statevector_block
    if workers > 1:
        with Pool(workers) as pool:
            counts = pool.map(worker, tasks)
    else:
        counts = [worker(task) for task in tasks]
    stats = EnsembleStats(trials=trials, successes=int(sum(counts)), seed=seed)
    logger.info(
        f"{method} ensemble for {c}, n={n_rounds}: {stats.successes}/{trials} "
        f"= {stats.estimate:.6f} +- {stats.standard_error:.6f}"
    )
    return stats


def _pool_batch(c, n_levels, systems, model, method, rng):
    """Successes and pairs formed at each level for one sub-pool."""
    successes, pairs_per_level = 0, []
    levels = coefficient_trajectory(c, n_levels)
    for level in levels:
        pairs = systems // 2
        pairs_per_level.append(pairs)
        if method == "binomial":
            won = int(rng.binomial(pairs, round_exact(level).success_probability))
        else:
            won = sum(
                schmidt_projection_round(level, model, rng).verdict == Verdict.SUCCESS
                for _ in range(pairs)
            )
        successes += won
        # each failed pair hands one system to the next level; odd leftovers drop out
        systems = pairs - won
    return successes, pairs_per_level


def pool_schmidt_oracle(
    c: SchmidtCoefficients,
    n_levels: int,
    pool_size: int,
    seed: int = 0,
    batches: int = 32,
    method: str = "binomial",
    model: Optional[ProbeModel] = None,
) -> PoolStats:
    """Per-system yield of pairwise Schmidt-projection concentration.

    The pool is split into ``batches`` independent sub-pools; the spread of
    their yields gives the standard error.
    """
    if pool_size < 2 or pool_size % 2:
        raise ValueError(f"pool_size must be a positive even number. Got {pool_size}")
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1. Got {n_levels}")
    if method not in pool_methods:
        raise ValueError(f"Unsupported pool method: {method}, supported methods are {pool_methods}")
    model = model or ProbeModel()
    batches = max(1, min(batches, pool_size // 2))
    base, extra = divmod(pool_size // 2, batches)
    total_successes, yields, pairs_per_level = 0, [], [0] * n_levels
    for batch in range(batches):
        systems = 2 * (base + (1 if batch < extra else 0))
        won, pairs = _pool_batch(c, n_levels, systems, model, method, make_rng(seed, batch))
        total_successes += won
        yields.append(won / systems)
        pairs_per_level = [x + y for x, y in zip(pairs_per_level, pairs)]
    stats = PoolStats(
        systems=pool_size,
        successes=total_successes,
        seed=seed,
        levels=n_levels,
        batch_yields=yields,
        pairs_per_level=pairs_per_level,
    )
    logger.info(
        f"pool oracle for {c}, {n_levels} levels: yield {stats.estimate:.6f} +- {stats.standard_error:.6f}"
    )
    return stats


def estimate_mislabel_rate(
    model: ProbeModel,
    trials: int,
    seed: int = 0,
    c: Optional[SchmidtCoefficients] = None,
) -> EnsembleStats:
    """Frequency with which the detector announces the wrong parity."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1. Got {trials}")
    c = c or SchmidtCoefficients.from_entanglement(1.0)
    state = tensor(ghz_state(2, c.a, c.b), prepare_ancilla())
    rng = make_rng(seed, 0)
    misreads = 0
    for branch_draw, flip_draw in rng.random((trials, 2)):
        misreads += pcd_measure(state, 0, 2, model, branch_draw, flip_draw).outcome.misread
    return EnsembleStats(trials=trials, successes=misreads, seed=seed)
