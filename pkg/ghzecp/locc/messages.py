from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..core.ecp import Verdict
from ..core.pcd import Parity
from ..core.statevector import Projection

PARTY_NAMES = [
    "Alice", "Bob", "Charlie", "Dave", "Eve", "Frank", "Grace", "Heidi", "Ivan", "Judy",
    "Mallory", "Niaj", "Olivia", "Peggy", "Rupert", "Sybil", "Trent", "Victor", "Walter", "Zach",
]


class PartyId(BaseModel, frozen=True):
    index: int
    label: str

    @classmethod
    def of(cls, index: int) -> "PartyId":
        if index < 0:
            raise ValueError(f"party index must be non-negative. Got {index}")
        label = PARTY_NAMES[index] if index < len(PARTY_NAMES) else f"Party{index}"
        return cls(index=index, label=label)

    @property
    def is_alice(self) -> bool:
        return self.index == 0


class ParityResult(BaseModel):
    kind: Literal["parity"] = "parity"
    round: int
    parity: Parity


class AncillaProjection(BaseModel):
    kind: Literal["projection"] = "projection"
    round: int
    outcome: Projection


class RoundVerdict(BaseModel):
    kind: Literal["verdict"] = "verdict"
    round: int
    verdict: Verdict


class Done(BaseModel):
    kind: Literal["done"] = "done"
    verdict: Verdict
    rounds: int
    # coefficients the parties are left holding after a final failure
    residual_a: Optional[float] = None
    residual_b: Optional[float] = None


Payload = Union[ParityResult, AncillaProjection, RoundVerdict, Done]


class ClassicalMessage(BaseModel):
    message_id: int
    sender: PartyId
    receivers: List[PartyId]
    payload: Payload = Field(discriminator="kind")
    sent_at: float

    @field_validator("sender")
    @classmethod
    def only_alice_sends(cls, sender: PartyId) -> PartyId:
        if not sender.is_alice:
            raise ValueError(f"messages originate from Alice only, got sender {sender.label}")
        return sender


class TranscriptEvent(BaseModel):
    time: float
    kind: Literal["quantum", "send", "deliver", "verdict"]
    actor: str
    payload: dict
