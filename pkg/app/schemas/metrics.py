import math

from pydantic import BaseModel, Field, computed_field

from app.schemas.packet import DropReason


class RoundClock(BaseModel):
    round_index: int = Field(0, ge=0)
    round_duration: float = Field(1.0, gt=0)
    now: float = Field(0.0, ge=0)

    @property
    def round_start(self) -> float:
        return self.round_index * self.round_duration

    def observe(self, t: float) -> None:
        """Move ``now`` to absolute time ``t``; frames still queued at the round end pin it there."""
        elapsed = t - self.round_start
        self.now = min(max(self.now, elapsed), self.round_duration)

    def advance(self) -> None:
        self.round_index += 1
        self.now = 0.0


class RoundRecord(BaseModel):
    round: int
    alive: int
    sent: int
    delivered: int
    pdr: float | None
    mean_delay_s: float | None
    mean_response_s: float | None
    energy_j: float


class MetricsLedger(BaseModel):
    sent: int = 0
    delivered: int = 0
    sum_delay: float = 0.0
    sum_response: float = 0.0
    first_node_death_round: int | None = None
    alive_curve: list[int] = Field(default_factory=list)
    energy_audit: dict[int, float] = Field(default_factory=dict)
    drops: dict[DropReason, int] = Field(default_factory=dict)
    death_rounds: dict[int, int] = Field(default_factory=dict)
    rounds: list[RoundRecord] = Field(default_factory=list)

    @computed_field
    @property
    def energy_consumed(self) -> float:
        return math.fsum(self.energy_audit.values())

    def record_drop(self, reason: DropReason) -> None:
        self.drops[reason] = self.drops.get(reason, 0) + 1


class MetricsSummary(BaseModel):
    protocol: str
    seed: int
    sent: int
    delivered: int
    no_traffic: bool
    pdr: float | None
    mean_delay_s: float | None
    mean_response_s: float | None
    first_death_round: int | None
    half_death_round: int | None
    last_death_round: int | None
    alive_curve: list[int]
    energy_j: float
    alive_final: int
    drops: dict[str, int]
