import math

from pydantic import BaseModel, ConfigDict, Field, computed_field


class RadioModel(BaseModel):
    """First-order radio plus log-distance path loss, all in SI units.

    e_elec in J/bit, eps_fs in J/bit/m^2, eps_mp in J/bit/m^4, powers in dBm/dB.
    """

    model_config = ConfigDict(frozen=True)

    e_elec: float = Field(50e-9, gt=0)
    eps_fs: float = Field(10e-12, gt=0)
    eps_mp: float = Field(0.0013e-12, gt=0)
    tx_power: float = 0.0
    pl0: float = 40.0
    path_loss_exponent: float = Field(2.0, gt=0)
    rx_sensitivity: float = -95.0
    bandwidth: float = Field(250_000.0, gt=0)

    @computed_field
    @property
    def d0(self) -> float:
        return math.sqrt(self.eps_fs / self.eps_mp)


class LinkSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    src: int
    dst: int
    distance: float = Field(..., ge=0)
    rssi: float
    let: float = Field(..., ge=0)
    hop_estimate: int = Field(..., ge=1)
