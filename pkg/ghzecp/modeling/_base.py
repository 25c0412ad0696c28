import json
import math
from os.path import join
from typing import List, Optional
from dataclasses import dataclass, field, fields

from ._const import TOLERANCE, PARSE_TOLERANCE, DEFAULT_E_GRID, DEFAULT_ROUND_LIST


class ConfigMixin:
    """JSON persistence shared by the run-level configuration objects."""

    config_name: str = "config.json"

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def save_pretrained(self, save_dir: str, **kwargs):
        with open(join(save_dir, self.config_name), "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_pretrained(cls, save_dir: str):
        with open(join(save_dir, cls.config_name), "r", encoding="utf-8") as f:
            return cls(**json.load(f))


@dataclass(frozen=True)
class SchmidtCoefficients:
    """Signed real pair (a, b) of a GHZ-class state a|H...H> + b|V...V>.

    The global phase is absorbed so that a >= 0; b keeps its sign because
    the failure branch of a concentration round flips it.
    """

    a: float
    b: float

    def __post_init__(self):
        norm = self.a * self.a + self.b * self.b
        if abs(norm - 1.0) > TOLERANCE:
            raise ValueError(
                f"coefficients must satisfy a^2 + b^2 = 1. Got a={self.a}, b={self.b} (norm {norm})"
            )
        if self.a < 0:
            raise ValueError(f"a must be non-negative by convention. Got {self.a}")

    @classmethod
    def from_unnormalized(cls, a: float, b: float, tolerance: Optional[float] = None):
        """Renormalize (a, b) and move the sign onto b.

        With ``tolerance`` set, inputs whose norm deviates by more than it
        are rejected instead of silently rescaled.
        """
        norm = a * a + b * b
        if norm == 0:
            raise ValueError("coefficients (0, 0) do not describe a state")
        if tolerance is not None and abs(norm - 1.0) > tolerance:
            raise ValueError(
                f"a^2 + b^2 must equal 1 within {tolerance}. Got {norm}"
            )
        scale = math.sqrt(norm)
        if a < 0:
            scale = -scale
        return cls(a=a / scale, b=b / scale)

    @classmethod
    def from_entanglement(cls, entanglement: float):
        """a = sqrt(E/2), b = sqrt(1 - E/2), so that |a| <= |b|."""
        if not (0 <= entanglement <= 1):
            raise ValueError(f"entanglement must be in [0, 1]. Got {entanglement}")
        return cls.from_unnormalized(
            math.sqrt(entanglement / 2), math.sqrt(1 - entanglement / 2)
        )

    @property
    def a2(self) -> float:
        return self.a * self.a

    @property
    def b2(self) -> float:
        return self.b * self.b

    @property
    def is_degenerate(self) -> bool:
        return self.a == 0 or self.b == 0

    def to_dict(self):
        return {"a": self.a, "b": self.b}


@dataclass
class ProbeModel(ConfigMixin):
    """Probe-phase model of the parity-check detector.

    theta is the conditional phase chi * t picked up per photon routed
    through a Kerr medium. A reported parity label is flipped with
    ``misclassification_probability``; the projection always follows the
    true parity. ``hh_phase_sign`` chooses which even ket carries +theta.
    """

    config_name = "probe_config.json"

    theta: float = field(default=0.1)
    misclassification_probability: float = field(default=0.0)
    hh_phase_sign: int = field(default=1, metadata={"choices": [1, -1]})

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive. Got {self.theta}")
        if not (0 <= self.misclassification_probability < 0.5):
            raise ValueError(
                f"misclassification_probability must be in [0, 0.5). Got {self.misclassification_probability}"
            )
        choices = fields(self)[2].metadata["choices"]
        if self.hh_phase_sign not in choices:
            raise ValueError(f"hh_phase_sign must be one of {choices}.")

    @property
    def is_ideal(self) -> bool:
        return self.misclassification_probability == 0


@dataclass
class ChannelConfig(ConfigMixin):
    """Classical channel between Alice and the remote parties."""

    config_name = "channel_config.json"

    latency: str = field(
        default="deterministic",
        metadata={"choices": ["deterministic", "uniform", "gamma", "exponential"]},
    )
    latency_mean: float = field(default=1.0)
    # coefficient of variation, used by uniform and gamma
    latency_cv: float = field(default=0.5)
    delivery: str = field(
        default="fifo", metadata={"choices": ["fifo", "per_sender_fifo"]}
    )
    verbose_notices: bool = field(default=False)

    def __post_init__(self):
        fields_info = {f.name: f for f in fields(self)}
        if self.latency not in fields_info["latency"].metadata["choices"]:
            raise ValueError(
                f"only support latency in {fields_info['latency'].metadata['choices']}. Got {self.latency}"
            )
        if self.delivery not in fields_info["delivery"].metadata["choices"]:
            raise ValueError(
                f"delivery policy {self.delivery} cannot guarantee exactly-once per-sender FIFO delivery, "
                f"supported: {fields_info['delivery'].metadata['choices']}"
            )
        if self.latency_mean <= 0:
            raise ValueError(f"latency_mean must be positive. Got {self.latency_mean}")
        if self.latency_cv <= 0:
            raise ValueError(f"latency_cv must be positive. Got {self.latency_cv}")
        if self.latency == "uniform" and self.latency_cv > 1 / math.sqrt(3):
            raise ValueError("uniform latency requires latency_cv <= 1/sqrt(3)")


@dataclass
class RunConfig(ConfigMixin):
    """Parameters of one command-line invocation."""

    config_name = "run_config.json"

    command: str = field(
        default="curve",
        metadata={"choices": ["curve", "compare", "simulate", "locc", "round"]},
    )
    a: Optional[float] = field(default=None)
    b: Optional[float] = field(default=None)
    e_grid: List[float] = field(default_factory=lambda: list(DEFAULT_E_GRID))
    rounds: List[int] = field(default_factory=lambda: list(DEFAULT_ROUND_LIST))
    trials: int = field(default=100_000)
    seed: int = field(default=0)
    n_parties: int = field(default=2)
    out: Optional[str] = field(default=None)
    theta: float = field(default=0.1)
    epsilon: float = field(default=0.0)

    def __post_init__(self):
        choices = fields(self)[0].metadata["choices"]
        if self.command not in choices:
            raise ValueError(f"command must be one of {choices}. Got {self.command}")
        for e in self.e_grid:
            if not (0 < e <= 1):
                raise ValueError(f"E values must be in (0, 1]. Got {e}")
        for n in self.rounds:
            if n < 1:
                raise ValueError(f"round counts must be >= 1. Got {n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1. Got {self.trials}")
        if self.n_parties < 2:
            raise ValueError(f"at least two parties are required. Got {self.n_parties}")
        if (self.a is None) != (self.b is None):
            raise ValueError("a and b must be given together")
        if self.a is not None:
            c = SchmidtCoefficients.from_unnormalized(
                self.a, self.b, tolerance=PARSE_TOLERANCE
            )
            self.a, self.b = c.a, c.b

    @property
    def coefficients(self) -> SchmidtCoefficients:
        if self.a is None:
            raise ValueError("coefficients were not given")
        return SchmidtCoefficients(self.a, self.b)

    def probe_model(self) -> ProbeModel:
        return ProbeModel(theta=self.theta, misclassification_probability=self.epsilon)
