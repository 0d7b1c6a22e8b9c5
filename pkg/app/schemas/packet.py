from enum import Enum

from pydantic import BaseModel, Field, model_validator


class DropReason(str, Enum):
    NONE = "None"
    NO_ROUTE = "NoRoute"
    LINK_LOSS = "LinkLoss"
    DEAD_NODE = "DeadNode"


class Packet(BaseModel):
    id: int
    # equals id unless the packet is an overlap copy of another payload
    payload_id: int
    src_device: int
    created_at: float
    bits: float = Field(..., ge=0)
    path: list[int] = Field(default_factory=list)
    hop_times: list[float] = Field(default_factory=list)
    delivered_at: float | None = None
    response_at: float | None = None
    dropped_reason: DropReason = DropReason.NONE

    @model_validator(mode="after")
    def check_timeline(self) -> "Packet":
        if self.delivered_at is not None:
            if self.dropped_reason is not DropReason.NONE:
                raise ValueError("a dropped packet cannot be delivered")
            if self.delivered_at < self.created_at:
                raise ValueError("delivered_at precedes created_at")
        if self.response_at is not None and (
            self.delivered_at is None or self.response_at < self.delivered_at
        ):
            raise ValueError("response_at must follow delivered_at")
        return self

    @property
    def dropped(self) -> bool:
        return self.dropped_reason is not DropReason.NONE

    def drop(self, reason: DropReason) -> None:
        self.dropped_reason = reason
