from typing import List

import pandas as pd
from loguru import logger

from ..core.analytics import comparison_curves, total_success_probability
from ..modeling._base import SchmidtCoefficients
from ..modeling._const import DEFAULT_E_GRID, DEFAULT_ROUND_LIST, DEFAULT_ROUNDS


def _check_grid(e_grid: List[float]):
    if len(e_grid) == 0:
        raise ValueError("E grid is empty")
    for e in e_grid:
        if not (0 < e <= 1):
            raise ValueError(f"E values must be in (0, 1]. Got {e}")


def curve_frame(e_grid: List[float] = None, rounds: List[int] = None) -> pd.DataFrame:
    """Success probability P_n against entanglement E, one column per n."""
    e_grid = DEFAULT_E_GRID if e_grid is None else e_grid
    rounds = DEFAULT_ROUND_LIST if rounds is None else rounds
    _check_grid(e_grid)
    if any(n < 1 for n in rounds):
        raise ValueError(f"round counts must be >= 1. Got {rounds}")
    rows = []
    for e in e_grid:
        c = SchmidtCoefficients.from_entanglement(e)
        row = {"E": e}
        for n in rounds:
            row[f"P_{n}"] = total_success_probability(c, n)
        rows.append(row)
    logger.info(f"curve over {len(e_grid)} points for n in {rounds}")
    return pd.DataFrame(rows, columns=["E"] + [f"P_{n}" for n in rounds])


def comparison_frame(e_grid: List[float] = None, n: int = DEFAULT_ROUNDS) -> pd.DataFrame:
    """Per-system success probability of this protocol against the pairwise baselines."""
    e_grid = DEFAULT_E_GRID if e_grid is None else e_grid
    _check_grid(e_grid)
    rows = [
        comparison_curves(SchmidtCoefficients.from_entanglement(e), n).to_dict() for e in e_grid
    ]
    rows = [dict(row, E=e) for row, e in zip(rows, e_grid)]
    logger.info(f"comparison over {len(e_grid)} points at n={n}")
    return pd.DataFrame(rows, columns=["E", "P_O", "P_Z", "P_S", "P_B"])
