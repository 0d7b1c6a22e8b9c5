"""Physical-layer quantities: distances, radio energy, RSSI and link lifetime."""

import math

from app.schemas.node import NodeState
from app.schemas.radio import LinkSample, RadioModel

SPEED_OF_LIGHT = 3.0e8  # m/s


def distance(a: NodeState, b: NodeState) -> float:
    return math.hypot(b.position[0] - a.position[0], b.position[1] - a.position[1])


def tx_energy(model: RadioModel, bits: float, d: float) -> float:
    if d < model.d0:
        return model.e_elec * bits + model.eps_fs * bits * d * d
    return model.e_elec * bits + model.eps_mp * bits * d**4


def rx_energy(model: RadioModel, bits: float) -> float:
    return model.e_elec * bits


def rssi(model: RadioModel, d: float, noise: float = 0.0) -> float:
    # clamp to the 1 m reference distance to stay off the log singularity
    d = max(d, 1.0)
    return model.tx_power - model.pl0 - 10.0 * model.path_loss_exponent * math.log10(d) - noise


def link_expiration_time(a: NodeState, b: NodeState, range: float) -> float:
    """Time until |(p_b - p_a) + t (v_b - v_a)| first exceeds ``range``."""
    dx = b.position[0] - a.position[0]
    dy = b.position[1] - a.position[1]
    if math.hypot(dx, dy) > range:
        return 0.0
    dvx = b.velocity[0] - a.velocity[0]
    dvy = b.velocity[1] - a.velocity[1]
    speed_sq = dvx * dvx + dvy * dvy
    if speed_sq == 0.0:
        return math.inf
    # larger root of speed_sq t^2 + 2(dp.dv) t + (|dp|^2 - range^2) = 0; c <= 0 keeps it >= 0
    half_b = dx * dvx + dy * dvy
    c = dx * dx + dy * dy - range * range
    disc = half_b * half_b - speed_sq * c
    return max(0.0, (-half_b + math.sqrt(disc)) / speed_sq)


def hop_estimate(d: float, range: float) -> int:
    return max(1, math.ceil(d / range))


def link_range(a: NodeState, b: NodeState) -> float:
    return min(a.comm_radius, b.comm_radius)


def sample_link(a: NodeState, b: NodeState, model: RadioModel) -> LinkSample:
    d = distance(a, b)
    reach = link_range(a, b)
    return LinkSample(
        src=a.id,
        dst=b.id,
        distance=d,
        rssi=rssi(model, d, b.noise_figure),
        let=link_expiration_time(a, b, reach),
        hop_estimate=hop_estimate(d, reach),
    )


def advance_positions(
    nodes: list[NodeState], dt: float, area: tuple[float, float]
) -> None:
    """Constant-velocity move of every device, reflecting off the area border."""
    width, height = area
    for node in nodes:
        if not node.battery_powered or node.velocity == (0.0, 0.0):
            continue
        (x, y), (vx, vy) = node.position, node.velocity
        x, vx = _reflect(x + vx * dt, vx, width)
        y, vy = _reflect(y + vy * dt, vy, height)
        node.position = (x, y)
        node.velocity = (vx, vy)


def _reflect(coordinate: float, speed: float, limit: float) -> tuple[float, float]:
    while coordinate < 0.0 or coordinate > limit:
        if coordinate < 0.0:
            coordinate = -coordinate
        else:
            coordinate = 2.0 * limit - coordinate
        speed = -speed
    return coordinate, speed
