from .channel import (
    ClassicalChannel,
    DeterministicLatency,
    ExponentialLatency,
    GammaLatency,
    LatencyProcess,
    UniformLatency,
    build_latency,
)
from .messages import (
    AncillaProjection,
    ClassicalMessage,
    Done,
    ParityResult,
    PartyId,
    RoundVerdict,
    TranscriptEvent,
)
from .protocol import Transcript, run_protocol
from .scheduler import EventScheduler
