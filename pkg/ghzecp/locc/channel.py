from abc import ABC, abstractmethod
from typing import Dict

import numpy as np

from ..modeling._base import ChannelConfig


class LatencyProcess(ABC):
    @abstractmethod
    def mean(self):
        """Return the mean one-way latency."""
        raise NotImplementedError()

    @abstractmethod
    def cv(self):
        """Return the coefficient of variation of the latency."""
        raise NotImplementedError()

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> float:
        raise NotImplementedError()

    def __str__(self):
        return f"{self.__class__.__name__}(" f"mean={self.mean()}, " f"cv={self.cv()})"

    def params(self):
        return self.mean(), self.cv()


class DeterministicLatency(LatencyProcess):
    def __init__(self, latency: float):
        self.latency_ = latency

    def mean(self):
        return self.latency_

    def cv(self):
        return 0

    def sample(self, rng: np.random.Generator) -> float:
        return self.latency_


class UniformLatency(LatencyProcess):
    def __init__(self, mean: float, cv: float):
        """Uniform on mean +- sqrt(3) * cv * mean."""
        self.mean_ = mean
        self.cv_ = cv
        half_width = np.sqrt(3) * cv * mean
        self.low = max(0.0, mean - half_width)
        self.high = mean + half_width

    def mean(self):
        return self.mean_

    def cv(self):
        return self.cv_

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.low, self.high))


class GammaLatency(LatencyProcess):
    def __init__(self, mean: float, cv: float):
        """
        Args:
            mean: mean latency.
            cv: coefficient of variation. When cv == 1, the latency is
                exponentially distributed.
        """
        self.mean_ = mean
        self.cv_ = cv
        self.shape = 1 / (cv * cv)
        self.scale = cv * cv * mean

    def mean(self):
        return self.mean_

    def cv(self):
        return self.cv_

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.gamma(self.shape, self.scale))


class ExponentialLatency(GammaLatency):
    def __init__(self, mean: float):
        super().__init__(mean, 1)


def build_latency(config: ChannelConfig) -> LatencyProcess:
    if config.latency == "deterministic":
        return DeterministicLatency(config.latency_mean)
    if config.latency == "uniform":
        return UniformLatency(config.latency_mean, config.latency_cv)
    if config.latency == "gamma":
        return GammaLatency(config.latency_mean, config.latency_cv)
    if config.latency == "exponential":
        return ExponentialLatency(config.latency_mean)
    raise ValueError(f"Unsupported latency: {config.latency}")


class ClassicalChannel:
    """Point-to-point links from Alice to every remote party.

    ``fifo`` keeps one global delivery order matching the send order;
    ``per_sender_fifo`` only keeps every link in send order, so deliveries to
    different parties may interleave arbitrarily.
    """

    def __init__(self, config: ChannelConfig, rng: np.random.Generator):
        self.config = config
        self.latency = build_latency(config)
        self.rng = rng
        self._last_global = 0.0
        self._last_link: Dict[int, float] = {}

    def delivery_time(self, sent_at: float, receiver: int) -> float:
        arrival = sent_at + self.latency.sample(self.rng)
        if self.config.delivery == "fifo":
            arrival = max(arrival, self._last_global)
            self._last_global = arrival
        else:
            arrival = max(arrival, self._last_link.get(receiver, 0.0))
        self._last_link[receiver] = arrival
        return arrival
