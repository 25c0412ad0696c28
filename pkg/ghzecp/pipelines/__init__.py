from .montecarlo import (
    EnsembleStats,
    PoolStats,
    estimate_mislabel_rate,
    estimate_success,
    pool_schmidt_oracle,
)
from .enumeration import EnumerationResult, enumerate_protocol
from .sweeps import comparison_frame, curve_frame
