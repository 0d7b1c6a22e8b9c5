from pydantic import BaseModel, ConfigDict, Field, model_validator


class Cluster(BaseModel):
    """A fog-anchored cluster snapshot; replaced, never mutated, between rounds."""

    model_config = ConfigDict(frozen=True)

    fog_anchor: int
    members: frozenset[int] = frozenset()
    # orphan device -> covered member it relays through
    relayed: dict[int, int] = Field(default_factory=dict)
    head: int | None = None
    head_grade: float | None = None
    epoch: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_head(self) -> "Cluster":
        if self.head is not None and self.head not in self.members:
            raise ValueError(f"head {self.head} is not a member of the cluster of fog {self.fog_anchor}")
        for orphan, relay in self.relayed.items():
            if relay not in self.members:
                raise ValueError(f"orphan {orphan} relays through non-member {relay}")
        return self

    def covers(self, device: int) -> bool:
        return device in self.members or device in self.relayed


class MembershipMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    # device -> fog ids (cluster keys) of every cluster covering it, ascending
    memberships: dict[int, tuple[int, ...]] = Field(default_factory=dict)
    uncovered: frozenset[int] = frozenset()

    @model_validator(mode="after")
    def check_disjoint(self) -> "MembershipMap":
        overlap = self.uncovered.intersection(self.memberships)
        if overlap:
            raise ValueError(f"devices {sorted(overlap)} are both covered and uncovered")
        return self
