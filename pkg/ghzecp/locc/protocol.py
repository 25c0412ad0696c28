"""
Nonlocal execution of the concentration protocol.

Alice owns every quantum operation. After each round she broadcasts the
verdict to the remote parties over a simulated classical channel; a final
``Done`` message carries the overall verdict and, after a failed last
round, the residual coefficients the parties keep holding.
"""
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..core.ecp import Verdict, round_statevector
from ..core.pcd import Parity
from ..core.statevector import PureState, ghz_state
from ..modeling._base import ChannelConfig, ProbeModel, SchmidtCoefficients
from ..utils.randomness import make_rng
from .channel import ClassicalChannel
from .messages import (
    AncillaProjection,
    ClassicalMessage,
    Done,
    ParityResult,
    PartyId,
    RoundVerdict,
    TranscriptEvent,
)
from .scheduler import EventScheduler

QUANTUM_STREAM = 0
CHANNEL_STREAM = 1


@dataclass
class Party:
    party: PartyId
    last_round: Optional[Tuple[Verdict, int]] = None
    final: Optional[Tuple[Verdict, int]] = None
    residual: Optional[SchmidtCoefficients] = None


@dataclass
class Transcript:
    n_parties: int
    coefficients: SchmidtCoefficients
    max_rounds: int
    seed: int
    events: List[TranscriptEvent] = field(default_factory=list)
    messages: List[ClassicalMessage] = field(default_factory=list)
    parties: List[Party] = field(default_factory=list)
    state: Optional[PureState] = None

    def record(self, time: float, kind: str, actor: str, payload: dict):
        self.events.append(TranscriptEvent(time=time, kind=kind, actor=actor, payload=payload))

    def verdicts(self) -> Dict[str, Tuple[Verdict, int]]:
        return {p.party.label: p.final for p in self.parties}

    @property
    def verdict(self) -> Verdict:
        return self.parties[0].final[0]

    @property
    def rounds(self) -> int:
        return self.parties[0].final[1]

    @property
    def final_state(self) -> Optional[SchmidtCoefficients]:
        """Residual coefficients after a failed last round, None on success."""
        return self.parties[0].residual

    def delivery_count(self, kind: Optional[str] = None) -> int:
        return sum(
            1
            for e in self.events
            if e.kind == "deliver" and (kind is None or e.payload["message"]["kind"] == kind)
        )

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(e.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
            for e in self.events
        ]
        return "\n".join(lines) + "\n"

    def check(self):
        """Raise ValueError if any transcript invariant is broken."""
        for e in self.events:
            if e.kind == "quantum" and e.actor != self.parties[0].party.label:
                raise ValueError(f"quantum operation attributed to {e.actor}")

        expected = {
            (m.message_id, r.label) for m in self.messages for r in m.receivers
        }
        delivered = defaultdict(int)
        per_receiver = defaultdict(list)
        for e in self.events:
            if e.kind == "deliver":
                delivered[(e.payload["message_id"], e.actor)] += 1
                per_receiver[e.actor].append(e.payload["message_id"])
        duplicated = [key for key, count in delivered.items() if count > 1]
        if duplicated:
            raise ValueError(f"messages delivered more than once: {duplicated}")
        if set(delivered) != expected:
            missing = sorted(expected - set(delivered))
            extra = sorted(set(delivered) - expected)
            raise ValueError(f"broadcast not delivered exactly once: missing={missing} extra={extra}")
        for receiver, ids in per_receiver.items():
            if ids != sorted(ids):
                raise ValueError(f"deliveries to {receiver} are out of send order: {ids}")

        finals = {p.party.label: p.final for p in self.parties}
        if any(v is None for v in finals.values()):
            raise ValueError(f"parties without a final verdict: {finals}")
        if len(set(finals.values())) != 1:
            raise ValueError(f"parties disagree on the verdict: {finals}")
        for p in self.parties[1:]:
            if p.last_round != p.final:
                raise ValueError(
                    f"{p.party.label} saw last round verdict {p.last_round} but final {p.final}"
                )


def _broadcast(transcript, scheduler, channel, payload, now):
    alice = transcript.parties[0].party
    message = ClassicalMessage(
        message_id=len(transcript.messages),
        sender=alice,
        receivers=[p.party for p in transcript.parties[1:]],
        payload=payload,
        sent_at=now,
    )
    transcript.messages.append(message)
    transcript.record(
        now,
        "send",
        alice.label,
        {
            "message_id": message.message_id,
            "receivers": [r.label for r in message.receivers],
            "message": payload.model_dump(mode="json"),
        },
    )
    for receiver in message.receivers:
        scheduler.schedule(
            channel.delivery_time(now, receiver.index), ("deliver", message, receiver.index)
        )


def _deliver(transcript: Transcript, message: ClassicalMessage, receiver: int, now: float):
    party = transcript.parties[receiver]
    payload = message.payload
    transcript.record(
        now,
        "deliver",
        party.party.label,
        {"message_id": message.message_id, "message": payload.model_dump(mode="json")},
    )
    if isinstance(payload, RoundVerdict):
        party.last_round = (payload.verdict, payload.round)
    elif isinstance(payload, Done):
        party.final = (payload.verdict, payload.rounds)
        if payload.residual_a is not None:
            party.residual = SchmidtCoefficients(payload.residual_a, payload.residual_b)
        transcript.record(
            now,
            "verdict",
            party.party.label,
            {"verdict": payload.verdict.value, "round": payload.rounds},
        )


def run_protocol(
    n_parties: int,
    c: SchmidtCoefficients,
    max_rounds: int,
    model: Optional[ProbeModel] = None,
    channel: Optional[ChannelConfig] = None,
    seed: int = 0,
) -> Transcript:
    if n_parties < 2:
        raise ValueError(f"at least two parties are required. Got {n_parties}")
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be >= 1. Got {max_rounds}")
    model = model or ProbeModel()
    channel = channel or ChannelConfig()
    link = ClassicalChannel(channel, make_rng(seed, CHANNEL_STREAM))
    rng = make_rng(seed, QUANTUM_STREAM)

    transcript = Transcript(n_parties=n_parties, coefficients=c, max_rounds=max_rounds, seed=seed)
    transcript.parties = [Party(PartyId.of(i)) for i in range(n_parties)]
    transcript.state = ghz_state(n_parties, c.a, c.b)
    alice = transcript.parties[0]
    name = alice.party.label
    logger.info(f"LOCC run: N={n_parties} c={c} n={max_rounds} seed={seed} channel={link.latency}")

    scheduler = EventScheduler()
    scheduler.schedule(0.0, ("round", 1, c))
    while scheduler.has_pending():
        event = scheduler.pop_next()
        now = scheduler.now
        if event[0] == "deliver":
            _deliver(transcript, event[1], event[2], now)
            continue

        _, k, current = event
        record = round_statevector(transcript.state, 0, current, model, rng)
        transcript.state = record.state
        transcript.record(now, "quantum", name, {"op": "prepare_ancilla", "round": k})
        transcript.record(
            now,
            "quantum",
            name,
            {
                "op": "parity_check",
                "round": k,
                "parity": record.parity.parity.value,
                "reported": record.parity.reported.value,
            },
        )
        if record.parity.reported == Parity.ODD:
            transcript.record(now, "quantum", name, {"op": "sigma_x", "round": k})
        transcript.record(
            now, "quantum", name, {"op": "project", "round": k, "outcome": record.projection.value}
        )
        if channel.verbose_notices:
            _broadcast(transcript, scheduler, link, ParityResult(round=k, parity=record.parity.reported), now)
            _broadcast(transcript, scheduler, link, AncillaProjection(round=k, outcome=record.projection), now)
        _broadcast(transcript, scheduler, link, RoundVerdict(round=k, verdict=record.verdict), now)

        if record.verdict == Verdict.FAILURE and k < max_rounds:
            scheduler.schedule(now, ("round", k + 1, record.next_coefficients))
            continue
        residual = record.next_coefficients
        alice.last_round = alice.final = (record.verdict, k)
        alice.residual = residual
        transcript.record(now, "verdict", name, {"verdict": record.verdict.value, "round": k})
        _broadcast(
            transcript,
            scheduler,
            link,
            Done(
                verdict=record.verdict,
                rounds=k,
                residual_a=None if residual is None else residual.a,
                residual_b=None if residual is None else residual.b,
            ),
            now,
        )

    transcript.check()
    logger.debug(f"LOCC run finished: {transcript.verdict.value} after {transcript.rounds} round(s)")
    return transcript
