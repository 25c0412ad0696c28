import heapq
from dataclasses import dataclass, field
from typing import Any, List, Optional


@dataclass(order=True)
class _ScheduledEvent:
    """
    Heap item ordering policy:
    1. 'time'
    2. 'seq_no' (submission order tie-break)
    """

    time: float
    seq_no: int
    event: Any = field(compare=False)


class EventScheduler:
    """Single-threaded event queue driving a virtual clock."""

    def __init__(self, start: float = 0.0) -> None:
        if start < 0:
            raise ValueError("start must be non-negative")
        self._now = start
        self._queue: List[_ScheduledEvent] = []
        self._next_seq = 0

    @property
    def now(self) -> float:
        return self._now

    def schedule(self, time: float, event: Any) -> None:
        if time < self._now:
            raise ValueError(f"cannot schedule at {time}, clock is at {self._now}")
        heapq.heappush(self._queue, _ScheduledEvent(time, self._next_seq, event))
        self._next_seq += 1

    def has_pending(self) -> bool:
        return bool(self._queue)

    def pop_next(self) -> Optional[Any]:
        if not self._queue:
            return None
        item = heapq.heappop(self._queue)
        self._now = item.time
        return item.event
