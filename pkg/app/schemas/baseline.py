from pydantic import BaseModel, Field

from app.schemas.scenario import Protocol


class BaselineState(BaseModel):
    """Auxiliary per-round state of the comparison protocols."""

    protocol: Protocol
    # EECRP-like: centroid per partition, partition members, head per partition
    centroids: list[tuple[float, float]] = Field(default_factory=list)
    partitions: list[list[int]] = Field(default_factory=list)
    heads: dict[int, int] = Field(default_factory=dict)
    # ERGID-like: hop count and estimated remaining delay towards the cloud
    hops_to_cloud: dict[int, int] = Field(default_factory=dict)
    delay_estimates: dict[int, float] = Field(default_factory=dict)
    neighbors: dict[int, list[int]] = Field(default_factory=dict)
