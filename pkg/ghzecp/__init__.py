from .modeling import ChannelConfig, ProbeModel, RunConfig, SchmidtCoefficients
from .core import (
    Parity,
    Verdict,
    concentration_report,
    eq8_literal,
    ghz_state,
    pcd_measure,
    round_exact,
    round_statevector,
    run_trajectory,
    total_success_probability,
)
from .locc import Transcript, run_protocol
from .pipelines import enumerate_protocol, estimate_success, pool_schmidt_oracle
from .utils import make_rng, make_trial_rng

__version__ = "0.1.0"
