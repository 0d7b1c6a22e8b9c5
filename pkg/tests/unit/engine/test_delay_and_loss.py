import pytest

from app.core.random import PortableRandom
from app.schemas.packet import DropReason
from app.schemas.scenario import Protocol
from app.services.config_parser import override
from app.services.simulation import SimulationState, link_success_probability, per_hop_latency


@pytest.mark.unit
@pytest.mark.req_5_simulation
class TestPerHopLatency:
    def test_empty_frame_at_zero_distance(self):
        assert per_hop_latency(0, 0.0) == 0.002

    def test_serialization_plus_processing(self):
        assert per_hop_latency(2500, 0.0) == pytest.approx(0.012)

    def test_propagation_term(self):
        assert per_hop_latency(0, 3.0e5, proc_delay=0.0) == pytest.approx(1e-3)

    def test_additive_over_a_path(self):
        hops = [(2000, 40.0), (2000, 75.0), (2000, 10.0)]
        total = sum(per_hop_latency(bits, d) for bits, d in hops)
        assert total == pytest.approx(3 * (0.008 + 0.002) + 125.0 / 3.0e8)


@pytest.mark.unit
@pytest.mark.req_5_simulation
class TestLinkSuccessProbability:
    def test_below_sensitivity(self):
        assert link_success_probability(-96.0, -95.0, 0.0) == 0.0

    def test_adequate_lossless(self):
        assert link_success_probability(-60.0, -95.0, 0.0) == 1.0

    def test_base_loss(self):
        assert link_success_probability(-95.0, -95.0, 0.25) == 0.75

    def test_empirical_loss_rate(self):
        rng = PortableRandom.streams(5)[1]
        p = link_success_probability(-70.0, -95.0, 0.1)
        trials = 100_000
        losses = sum(not rng.bernoulli(p) for _ in range(trials))
        assert losses / trials == pytest.approx(0.1, abs=0.01)


@pytest.mark.unit
@pytest.mark.req_5_simulation
class TestPortableRandom:
    def test_same_seed_same_stream(self):
        first = PortableRandom.streams(42)[0]
        second = PortableRandom.streams(42)[0]
        assert [first.raw() for _ in range(2000)] == [second.raw() for _ in range(2000)]

    def test_streams_are_independent(self):
        topology, protocol = PortableRandom.streams(42)
        assert [topology.raw() for _ in range(10)] != [protocol.raw() for _ in range(10)]

    def test_doubles_in_unit_interval(self):
        rng = PortableRandom.streams(1)[0]
        draws = [rng.random() for _ in range(5000)]
        assert all(0.0 <= x < 1.0 for x in draws)
        assert sum(draws) / len(draws) == pytest.approx(0.5, abs=0.02)

    def test_certain_events_do_not_draw(self):
        rng = PortableRandom.streams(9)[0]
        reference = PortableRandom.streams(9)[0]
        assert rng.bernoulli(1.0) and not rng.bernoulli(0.0)
        assert rng.raw() == reference.raw()

    def test_poisson_mean(self):
        rng = PortableRandom.streams(3)[1]
        draws = [rng.poisson(2.0) for _ in range(20_000)]
        assert sum(draws) / len(draws) == pytest.approx(2.0, abs=0.05)
        assert rng.poisson(0.0) == 0


@pytest.mark.unit
@pytest.mark.req_5_simulation
class TestEnergyAccounting:
    def test_charge_draws_and_audits(self, small_config):
        state = SimulationState(small_config, Protocol.HRIOT, 1)
        device = state.nodes[0]
        assert state.charge(device, 0.01)
        assert device.residual_energy == pytest.approx(small_config.device_initial_energy - 0.01)
        assert state.ledger.energy_audit[0] == pytest.approx(0.01)

    def test_unaffordable_charge_kills_device(self, small_config):
        state = SimulationState(small_config, Protocol.HRIOT, 1)
        device = state.nodes[0]
        assert not state.charge(device, 10.0)
        assert not device.alive and device.residual_energy == 0.0
        assert state.ledger.energy_audit[0] == pytest.approx(small_config.device_initial_energy)
        assert state.ledger.death_rounds == {0: 1}

    def test_infrastructure_is_never_charged(self, small_config):
        state = SimulationState(small_config, Protocol.HRIOT, 1)
        fog = state.nodes[state.fog_ids[0]]
        assert state.charge(fog, 1e6)
        assert fog.alive and fog.residual_energy == 0.0

    def test_sender_below_one_frame_drops_dead_node(self, small_config):
        config = override(small_config, device_initial_energy=1e-6)
        state = SimulationState(config, Protocol.DIRECT, 1)
        state.begin_round()
        packet = state.new_packet(0)
        state.round_packets.append(packet)
        delivered = state.run_radio([packet], next_hop=lambda p: state.cloud_id, sinks={state.cloud_id})
        assert delivered == []
        assert packet.dropped_reason is DropReason.DEAD_NODE
        assert not state.nodes[0].alive
        assert state.ledger.drops == {DropReason.DEAD_NODE: 1}

    def test_receiver_serves_one_frame_at_a_time(self, small_config):
        config = override(small_config, base_loss=0.0, device_initial_energy=10.0, rx_sensitivity=-200.0)
        state = SimulationState(config, Protocol.DIRECT, 1)
        state.begin_round()
        packets = [state.new_packet(d) for d in (0, 1, 2)]
        arrived = state.run_radio(packets, next_hop=lambda p: state.cloud_id, sinks={state.cloud_id})
        times = sorted(p.hop_times[-1] for p in arrived)
        airtime = config.packet_bits / config.bandwidth
        assert len(arrived) == 3
        assert times[1] - times[0] >= airtime - 1e-6
        assert times[2] - times[1] >= airtime - 1e-6
