from pydantic import BaseModel, ConfigDict, Field


class FogTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    root: int
    branching: int = Field(..., ge=1)
    parent: dict[int, int] = Field(default_factory=dict)
    depth: dict[int, int] = Field(default_factory=dict)
    # fogs in level order, closest to the cloud first
    order: tuple[int, ...] = ()
    edge_length: dict[int, float] = Field(default_factory=dict)

    @property
    def max_depth(self) -> int:
        return max(self.depth.values(), default=0)

    def children(self, node: int) -> list[int]:
        return [fog for fog in self.order if self.parent[fog] == node]


class FogPayload(BaseModel):
    model_config = ConfigDict(frozen=True)

    payload_id: int
    bits: float = Field(..., ge=0)
    ready_at: float


class UpwardTransmission(BaseModel):
    model_config = ConfigDict(frozen=True)

    src: int
    dst: int
    payload_ids: tuple[int, ...]
    raw_bits: float
    bits: float
    depart_at: float
    arrive_at: float
