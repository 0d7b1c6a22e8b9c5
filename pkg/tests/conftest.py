import pytest

from app.schemas.node import NodeState, Role
from app.schemas.radio import RadioModel
from app.schemas.scenario import ScenarioConfig
from app.services.config_parser import override


@pytest.fixture
def radio_model():
    return RadioModel()


@pytest.fixture
def path_loss_model():
    return RadioModel(tx_power=0.0, pl0=40.0, path_loss_exponent=2.0)


@pytest.fixture
def make_node():
    def factory(
        node_id: int,
        position=(0.0, 0.0),
        role: Role = Role.DEVICE,
        velocity=(0.0, 0.0),
        energy: float = 1.0,
        noise: float = 0.0,
        radius: float = 100.0,
    ) -> NodeState:
        battery = role is Role.DEVICE
        return NodeState(
            id=node_id,
            role=role,
            position=position,
            velocity=velocity,
            residual_energy=energy if battery else 0.0,
            initial_energy=energy if battery else 0.0,
            noise_figure=noise,
            comm_radius=radius,
        )

    return factory


@pytest.fixture
def small_config():
    return ScenarioConfig(
        area=(100.0, 100.0),
        device_count=20,
        fog_count=2,
        rounds=10,
        seed=7,
    )


@pytest.fixture
def reference_config():
    """100 devices in 200 x 200 m, 4 grid fogs, centered cloud, defaults elsewhere."""
    return ScenarioConfig()


@pytest.fixture
def lossless_config(reference_config):
    return override(reference_config, base_loss=0.0, device_initial_energy=100.0)
