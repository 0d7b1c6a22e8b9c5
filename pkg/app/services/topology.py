import math

from app.core.random import PortableRandom
from app.schemas.node import NodeState, Role
from app.schemas.scenario import ScenarioConfig


def build_topology(config: ScenarioConfig, rng: PortableRandom) -> dict[int, NodeState]:
    """Devices get ids 0..N-1, fogs N..N+F-1 and the cloud N+F.

    Placement, noise figures and velocities come from the topology stream only,
    so every protocol sees the same network for a given seed.
    """
    width, height = config.area
    nodes: dict[int, NodeState] = {}
    for device_id in range(config.device_count):
        position = (rng.uniform(0.0, width), rng.uniform(0.0, height))
        noise = rng.uniform(0.0, config.noise_figure_max)
        speed = rng.uniform(0.0, config.max_speed)
        heading = rng.uniform(0.0, 2.0 * math.pi)
        velocity = (0.0, 0.0) if speed == 0.0 else (speed * math.cos(heading), speed * math.sin(heading))
        nodes[device_id] = NodeState(
            id=device_id,
            role=Role.DEVICE,
            position=position,
            velocity=velocity,
            residual_energy=config.device_initial_energy,
            initial_energy=config.device_initial_energy,
            noise_figure=noise,
            comm_radius=config.device_comm_radius,
        )
    for index, position in enumerate(config.fog_positions):
        fog_id = config.device_count + index
        nodes[fog_id] = NodeState(
            id=fog_id,
            role=Role.FOG,
            position=position,
            noise_figure=rng.uniform(0.0, config.noise_figure_max),
            comm_radius=config.fog_comm_radius,
        )
    cloud_id = config.device_count + config.fog_count
    nodes[cloud_id] = NodeState(
        id=cloud_id,
        role=Role.CLOUD,
        position=config.cloud_position,
        noise_figure=rng.uniform(0.0, config.noise_figure_max),
        comm_radius=config.cloud_comm_radius,
    )
    return nodes


def devices(nodes: dict[int, NodeState]) -> list[NodeState]:
    return [node for node in nodes.values() if node.role is Role.DEVICE]


def fogs(nodes: dict[int, NodeState]) -> list[NodeState]:
    return sorted((node for node in nodes.values() if node.role is Role.FOG), key=lambda n: n.id)


def cloud(nodes: dict[int, NodeState]) -> NodeState:
    return next(node for node in nodes.values() if node.role is Role.CLOUD)
