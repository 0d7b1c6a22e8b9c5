from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator

from app.utils.validator import finite, validate_field


class Role(str, Enum):
    DEVICE = "Device"
    FOG = "Fog"
    CLOUD = "Cloud"


class NodeState(BaseModel):
    """A device, fog or cloud entity.

    Only devices are battery constrained; fog and cloud nodes are mains powered
    and their energy fields are never drawn down.
    """

    id: int = Field(..., ge=0)
    role: Role
    position: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)
    residual_energy: float = Field(0.0, ge=0)
    initial_energy: float = Field(0.0, ge=0)
    noise_figure: float = 0.0
    comm_radius: float = Field(..., gt=0)
    alive: bool = True

    @field_validator("position", "velocity")
    def validate_vector(cls, value: tuple[float, float]) -> tuple[float, float]:
        return tuple(validate_field([finite], component) for component in value)

    @model_validator(mode="after")
    def check_energy(self) -> "NodeState":
        if self.residual_energy > self.initial_energy:
            raise ValueError("residual_energy cannot exceed initial_energy")
        if self.role is Role.DEVICE and self.alive != (self.residual_energy > 0):
            raise ValueError("a device is alive exactly while it has residual energy")
        return self

    @property
    def battery_powered(self) -> bool:
        return self.role is Role.DEVICE
