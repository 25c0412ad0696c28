from ._base import (
    ChannelConfig,
    ProbeModel,
    RunConfig,
    SchmidtCoefficients,
)
from ._const import *
