import numpy as np


def substream_seed(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, *path])


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Counter-based (Philox) generator for the substream ``path`` of ``seed``.

    Substreams depend only on (seed, path), never on the order in which they
    are created, so trials and batches can run in any order or in parallel.
    """
    return np.random.Generator(np.random.Philox(substream_seed(seed, *path)))


def make_trial_rng(seed: int, trial: int) -> np.random.Generator:
    return make_rng(seed, trial)


def block_sizes(total: int, block_size: int):
    """Split ``total`` items into consecutive blocks of at most ``block_size``."""
    if total < 1:
        raise ValueError(f"total must be >= 1. Got {total}")
    full, rest = divmod(total, block_size)
    sizes = [block_size] * full
    if rest:
        sizes.append(rest)
    return sizes
