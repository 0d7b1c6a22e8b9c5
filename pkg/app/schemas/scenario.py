import math
from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from app.schemas.radio import RadioModel
from app.utils.validator import finite, non_negative, validate_field

CH_CRITERIA_COUNT = 6


class Protocol(str, Enum):
    HRIOT = "HRIOT"
    DIRECT = "DIRECT"
    EECRP_LIKE = "EECRP_LIKE"
    ERGID_LIKE = "ERGID_LIKE"


class ElectionSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float = Field(0.5, gt=0, le=1)
    weights: tuple[float, ...] = (1.0,) * CH_CRITERIA_COUNT
    let_cap: float = Field(3600.0, gt=0)
    candidate_filter: Literal["mean_energy", "all"] = "all"


class ScenarioConfig(BaseModel):
    """Every scenario key, validated strictly; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    # topology
    area: tuple[float, float] = (200.0, 200.0)
    device_count: int = Field(100, ge=0)
    fog_count: int = Field(4, ge=0)
    fog_positions: list[tuple[float, float]] | None = None
    cloud_position: tuple[float, float] | None = None
    device_comm_radius: float = Field(80.0, gt=0)
    fog_comm_radius: float = Field(100.0, gt=0)
    cloud_comm_radius: float = Field(100.0, gt=0)
    noise_figure_max: float = Field(6.0, ge=0)
    max_speed: float = Field(0.0, ge=0)
    device_initial_energy: float = Field(0.1, gt=0)

    # run
    rounds: int = Field(200, ge=0)
    round_duration: float = Field(1.0, gt=0)
    seed: int = Field(1, ge=0)

    # radio
    e_elec: float = Field(50e-9, gt=0)
    eps_fs: float = Field(10e-12, gt=0)
    eps_mp: float = Field(0.0013e-12, gt=0)
    tx_power: float = 0.0
    pl0: float = 40.0
    path_loss_exponent: float = Field(2.0, gt=0)
    rx_sensitivity: float = -95.0
    bandwidth: float = Field(250_000.0, gt=0)
    backhaul_bandwidth: float = Field(100_000_000.0, gt=0)
    proc_delay: float = Field(0.002, ge=0)
    cloud_processing: float = Field(0.005, ge=0)

    # traffic
    packet_bits: int = Field(2000, ge=0)
    header_bits: int = Field(200, ge=0)
    traffic_model: Literal["constant", "poisson"] = "constant"
    packet_rate: float = Field(1.0, ge=0)

    # protocol knobs
    rho: float = Field(0.5, gt=0, le=1)
    weights: list[float] = Field(default_factory=lambda: [1.0] * CH_CRITERIA_COUNT)
    reelection_period: int = Field(5, ge=1)
    let_cap: float = Field(3600.0, gt=0)
    ch_candidate_filter: Literal["mean_energy", "all"] = "all"
    branching: int = Field(2, ge=1)
    aggregation_ratio: float = Field(1.0, gt=0, le=1)
    base_loss: float = Field(0.01, ge=0, le=1)
    duplicate_to_all_overlaps: bool = False

    @field_validator("area")
    def validate_area(cls, value: tuple[float, float]) -> tuple[float, float]:
        for side in value:
            if not (math.isfinite(side) and side > 0):
                raise ValueError("area sides must be finite and strictly positive")
        return value

    @field_validator("weights")
    def validate_weights(cls, value: list[float]) -> list[float]:
        if len(value) != CH_CRITERIA_COUNT:
            raise ValueError(f"exactly {CH_CRITERIA_COUNT} weights are required")
        value = [validate_field([finite, non_negative], w) for w in value]
        if sum(value) <= 0:
            raise ValueError("at least one weight must be positive")
        return value

    @field_validator("fog_positions")
    def validate_fog_positions(
        cls, value: list[tuple[float, float]] | None, info: ValidationInfo
    ) -> list[tuple[float, float]] | None:
        fog_count = info.data.get("fog_count")
        if value is not None and fog_count is not None and len(value) != fog_count:
            raise ValueError(f"fog_positions lists {len(value)} points for fog_count={fog_count}")
        return value

    @model_validator(mode="after")
    def materialize_positions(self) -> "ScenarioConfig":
        width, height = self.area
        if self.fog_positions is None:
            object.__setattr__(self, "fog_positions", grid_positions(self.fog_count, width, height))
        if self.cloud_position is None:
            object.__setattr__(self, "cloud_position", (width / 2.0, height / 2.0))
        return self

    @property
    def radio(self) -> RadioModel:
        return RadioModel(
            e_elec=self.e_elec,
            eps_fs=self.eps_fs,
            eps_mp=self.eps_mp,
            tx_power=self.tx_power,
            pl0=self.pl0,
            path_loss_exponent=self.path_loss_exponent,
            rx_sensitivity=self.rx_sensitivity,
            bandwidth=self.bandwidth,
        )

    @property
    def election(self) -> ElectionSettings:
        return ElectionSettings(
            rho=self.rho,
            weights=tuple(self.weights),
            let_cap=self.let_cap,
            candidate_filter=self.ch_candidate_filter,
        )


def grid_positions(count: int, width: float, height: float) -> list[tuple[float, float]]:
    """Cell centers of a near-square grid, filled row by row."""
    if count == 0:
        return []
    cols = math.ceil(math.sqrt(count))
    rows = math.ceil(count / cols)
    return [
        ((index % cols + 0.5) * width / cols, (index // cols + 0.5) * height / rows)
        for index in range(count)
    ]
