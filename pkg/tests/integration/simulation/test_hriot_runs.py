import pytest

from app.schemas.packet import DropReason
from app.schemas.scenario import Protocol, ScenarioConfig
from app.services.baselines import run_round_direct
from app.services.config_parser import override
from app.services.engine import SimulationEngine, run_scenario
from app.services.simulation import SimulationState, per_hop_latency
from app.services.radio import distance


@pytest.mark.integration
@pytest.mark.req_5_simulation
class TestHriotRun:
    def test_energy_is_conserved_every_round(self, reference_config):
        config = override(reference_config, rounds=500)
        engine = SimulationEngine(config, Protocol.HRIOT)
        for state in engine.iter_rounds():
            for device in state.device_ids:
                node = state.nodes[device]
                spent = node.initial_energy - node.residual_energy
                assert spent == pytest.approx(state.ledger.energy_audit[device], rel=1e-9, abs=1e-15)

    def test_lossless_run_delivers_everything(self, lossless_config):
        result = run_scenario(lossless_config, Protocol.HRIOT)
        assert result.summary.sent == 100 * 200
        assert result.summary.pdr == 1.0
        assert result.summary.first_death_round is None

    def test_same_seed_same_ledger(self, small_config):
        first = run_scenario(small_config, Protocol.HRIOT, seed=5)
        second = run_scenario(small_config, Protocol.HRIOT, seed=5)
        assert first.ledger.model_dump() == second.ledger.model_dump()

    def test_zero_rounds(self, small_config):
        result = run_scenario(override(small_config, rounds=0), Protocol.HRIOT)
        assert result.summary.sent == 0
        assert result.summary.no_traffic
        assert result.ledger.rounds == []

    def test_payload_conservation_at_the_cloud(self, reference_config):
        engine = SimulationEngine(override(reference_config, rounds=50), Protocol.HRIOT)
        for state in engine.iter_rounds():
            assert state.cloud_payloads == state.fog_handoff

    def test_coverage_is_complete_every_round(self, reference_config):
        config = override(reference_config, rounds=30, max_speed=3.0, reelection_period=1)
        engine = SimulationEngine(config, Protocol.HRIOT)
        for state in engine.iter_rounds():
            membership = state.membership
            for device in state.alive_devices():
                covered = device.id in membership.memberships
                assert covered != (device.id in membership.uncovered)

    def test_packets_respect_causality(self, small_config):
        engine = SimulationEngine(small_config, Protocol.HRIOT)
        for state in engine.iter_rounds():
            for packet in state.round_packets:
                times = packet.hop_times
                assert all(a < b for a, b in zip(times, times[1:]))
                assert len(packet.hop_times) == len(packet.path)
                if packet.delivered_at is not None:
                    assert packet.created_at <= packet.delivered_at <= packet.response_at

    def test_all_links_lossy(self, small_config):
        result = run_scenario(override(small_config, base_loss=1.0), Protocol.HRIOT)
        assert result.summary.sent > 0
        assert result.summary.delivered == 0
        assert result.summary.drops["LinkLoss"] > 0

    def test_device_below_one_frame_dies(self, small_config):
        result = run_scenario(override(small_config, device_initial_energy=1e-6), Protocol.HRIOT)
        assert result.summary.first_death_round == 1
        assert result.ledger.drops[DropReason.DEAD_NODE] > 0

    def test_one_device_end_to_end_delay(self):
        config = ScenarioConfig(
            device_count=1,
            fog_count=1,
            fog_positions=[(50.0, 50.0)],
            branching=1,
            base_loss=0.0,
            rounds=1,
        )
        engine = SimulationEngine(config, Protocol.HRIOT)
        engine.state.nodes[0].position = (50.0, 20.0)
        result = engine.run()
        device, fog, cloud = (engine.state.nodes[i] for i in (0, 1, 2))
        up = per_hop_latency(2000, distance(device, fog)) + per_hop_latency(
            200 + 2000, distance(fog, cloud), config.backhaul_bandwidth
        )
        down = per_hop_latency(200, distance(cloud, fog), config.backhaul_bandwidth) + per_hop_latency(
            200, distance(fog, device)
        )
        assert result.summary.pdr == 1.0
        assert result.summary.mean_delay_s == pytest.approx(up)
        assert result.summary.mean_response_s == pytest.approx(up + config.cloud_processing + down)


@pytest.mark.integration
@pytest.mark.req_3_overlapping_clusters
class TestReElection:
    def test_dead_head_is_replaced_next_round(self, reference_config):
        engine = SimulationEngine(override(reference_config, rounds=3, reelection_period=100), Protocol.HRIOT)
        rounds = engine.iter_rounds()
        state = next(rounds)
        victim = state.nodes[state.clusters[0].head]
        victim.residual_energy = 0.0
        victim.alive = False
        epoch = state.epoch
        state = next(rounds)
        assert state.epoch == epoch + 1
        assert all(state.nodes[c.head].alive for c in state.clusters)
        assert victim.id not in {c.head for c in state.clusters}

    def test_heads_persist_within_a_period(self, reference_config):
        engine = SimulationEngine(override(reference_config, rounds=4, base_loss=0.0, reelection_period=5), Protocol.HRIOT)
        heads = [tuple(c.head for c in state.clusters) for state in engine.iter_rounds()]
        assert len(set(heads)) == 1


@pytest.mark.integration
@pytest.mark.req_5_simulation
class TestTrafficVariants:
    def test_overlap_duplicates_count_once(self, lossless_config):
        config = override(lossless_config, rounds=20, duplicate_to_all_overlaps=True)
        result = run_scenario(config, Protocol.HRIOT)
        assert result.summary.sent == 100 * 20
        assert result.summary.pdr == 1.0

    def test_poisson_traffic(self, small_config):
        result = run_scenario(override(small_config, traffic_model="poisson", packet_rate=2.0), Protocol.HRIOT)
        assert result.summary.sent > 0
        assert result.summary.delivered <= result.summary.sent

    def test_mobile_devices_stay_in_area(self, small_config):
        config = override(small_config, max_speed=20.0, rounds=40)
        engine = SimulationEngine(config, Protocol.HRIOT)
        width, height = config.area
        for state in engine.iter_rounds():
            for device in state.device_ids:
                x, y = state.nodes[device].position
                assert 0.0 <= x <= width and 0.0 <= y <= height


@pytest.mark.integration
@pytest.mark.req_6_baselines
class TestBaselineRuns:
    @pytest.mark.parametrize("protocol", [Protocol.DIRECT, Protocol.EECRP_LIKE, Protocol.ERGID_LIKE])
    def test_energy_conservation(self, reference_config, protocol):
        engine = SimulationEngine(override(reference_config, rounds=60), protocol)
        for state in engine.iter_rounds():
            for device in state.device_ids:
                node = state.nodes[device]
                spent = node.initial_energy - node.residual_energy
                assert spent == pytest.approx(state.ledger.energy_audit[device], rel=1e-9, abs=1e-15)

    @pytest.mark.parametrize("protocol", [Protocol.DIRECT, Protocol.EECRP_LIKE, Protocol.ERGID_LIKE])
    def test_deterministic(self, small_config, protocol):
        first = run_scenario(small_config, protocol, seed=11)
        second = run_scenario(small_config, protocol, seed=11)
        assert first.ledger.model_dump() == second.ledger.model_dump()

    def test_overloaded_cloud_serves_one_frame_at_a_time_across_rounds(self, reference_config):
        config = override(reference_config, rounds=4, traffic_model="poisson", packet_rate=2.0, base_loss=0.0)
        state = SimulationState(config, Protocol.DIRECT, config.seed)
        airtime = config.packet_bits / config.bandwidth
        arrivals = []
        spilled = False
        for _ in range(config.rounds):
            run_round_direct(state)
            assert 0.0 <= state.clock.now <= config.round_duration
            round_arrivals = [p.delivered_at for p in state.round_packets if p.delivered_at is not None]
            spilled |= max(round_arrivals) - state.round_start > config.round_duration
            arrivals.extend(round_arrivals)
            state.end_round()
        assert spilled
        arrivals.sort()
        # propagation differs by at most a microsecond between senders
        assert all(b - a >= airtime - 1e-5 for a, b in zip(arrivals, arrivals[1:]))

    def test_eecrp_partition_covers_alive_devices(self, reference_config):
        engine = SimulationEngine(override(reference_config, rounds=25), Protocol.EECRP_LIKE)
        for state in engine.iter_rounds():
            assigned = [m for members in state.baseline.partitions for m in members]
            partitioned = set(assigned)
            assert len(assigned) == len(partitioned)
            assert {d.id for d in state.alive_devices()} <= partitioned
