"""Shared per-run state and the in-round radio mechanics used by every protocol."""

import heapq
import logging
from collections.abc import Callable, Iterable

from app.core.random import PortableRandom
from app.schemas.baseline import BaselineState
from app.schemas.cluster import Cluster, MembershipMap
from app.schemas.fog_tree import FogTree
from app.schemas.metrics import MetricsLedger, RoundClock, RoundRecord
from app.schemas.node import NodeState, Role
from app.schemas.packet import DropReason, Packet
from app.schemas.scenario import Protocol, ScenarioConfig
from app.services import topology
from app.services.fog_tree import build_balanced_tree
from app.services.radio import (
    SPEED_OF_LIGHT,
    advance_positions,
    distance,
    rssi,
    rx_energy,
    tx_energy,
)

logger = logging.getLogger(__name__)


def per_hop_latency(
    bits: float, d: float, bandwidth: float = 250_000.0, proc_delay: float = 0.002
) -> float:
    return bits / bandwidth + d / SPEED_OF_LIGHT + proc_delay


def link_success_probability(rssi_dbm: float, sensitivity_dbm: float, base_loss: float) -> float:
    if rssi_dbm < sensitivity_dbm:
        return 0.0
    return 1.0 - base_loss


class SimulationState:
    """Everything one run mutates: nodes, clocks, RNG streams, ledger, protocol state."""

    def __init__(self, config: ScenarioConfig, protocol: Protocol, seed: int):
        self.config = config
        self.protocol = protocol
        self.seed = seed
        topology_rng, self.rng = PortableRandom.streams(seed)
        self.nodes: dict[int, NodeState] = topology.build_topology(config, topology_rng)
        self.radio = config.radio
        self.clock = RoundClock(round_duration=config.round_duration)
        self.device_ids = [n.id for n in topology.devices(self.nodes)]
        self.fog_ids = [n.id for n in topology.fogs(self.nodes)]
        self.cloud_id = topology.cloud(self.nodes).id
        self.ledger = MetricsLedger(energy_audit={d: 0.0 for d in self.device_ids})
        self.tree: FogTree = build_balanced_tree(
            topology.fogs(self.nodes), self.nodes[self.cloud_id], config.branching
        )

        # HR-IoT clustering snapshot
        self.clusters: list[Cluster] = []
        self.membership: MembershipMap | None = None
        self.uplinks: dict[int, int] = {}
        self.epoch = 0

        self.baseline = BaselineState(protocol=protocol)

        self.round_packets: list[Packet] = []
        self.fog_handoff: set[int] = set()
        self.cloud_payloads: set[int] = set()
        self._next_packet_id = 0
        self._rx_free: dict[int, float] = {}

    # -- round lifecycle ------------------------------------------------------

    @property
    def round_number(self) -> int:
        return self.clock.round_index + 1

    @property
    def round_start(self) -> float:
        return self.clock.round_start

    def alive_devices(self) -> list[NodeState]:
        return [self.nodes[d] for d in self.device_ids if self.nodes[d].alive]

    def begin_round(self) -> None:
        if self.clock.round_index > 0:
            advance_positions(
                [self.nodes[d] for d in self.device_ids], self.config.round_duration, self.config.area
            )
        self.round_packets = []
        self.fog_handoff = set()
        self.cloud_payloads = set()

    def election_due(self) -> bool:
        return (self.round_number - 1) % self.config.reelection_period == 0

    def generate_packets(self) -> list[Packet]:
        packets = []
        for device in self.alive_devices():
            if self.config.traffic_model == "poisson":
                count = self.rng.poisson(self.config.packet_rate)
            else:
                count = 1
            for _ in range(count):
                packets.append(self.new_packet(device.id))
        self.round_packets.extend(packets)
        return packets

    def new_packet(self, device: int, payload_id: int | None = None) -> Packet:
        packet_id = self._next_packet_id
        self._next_packet_id += 1
        return Packet(
            id=packet_id,
            payload_id=packet_id if payload_id is None else payload_id,
            src_device=device,
            created_at=self.round_start,
            bits=self.config.packet_bits,
            path=[device],
            hop_times=[self.round_start],
        )

    def copy_packet(self, packet: Packet) -> Packet:
        duplicate = self.new_packet(packet.src_device, payload_id=packet.payload_id)
        self.round_packets.append(duplicate)
        return duplicate

    # -- energy ---------------------------------------------------------------

    def charge(self, node: NodeState, joules: float) -> bool:
        """Draw energy from a battery node; False when it cannot pay (and dies)."""
        if not node.battery_powered:
            return True
        if not node.alive:
            return False
        if joules > node.residual_energy:
            self.ledger.energy_audit[node.id] += node.residual_energy
            node.residual_energy = 0.0
            self._kill(node)
            return False
        node.residual_energy -= joules
        self.ledger.energy_audit[node.id] += joules
        if node.residual_energy <= 0.0:
            node.residual_energy = 0.0
            self._kill(node)
        return True

    def _kill(self, node: NodeState) -> None:
        node.alive = False
        self.ledger.death_rounds[node.id] = self.round_number
        logger.debug(f"Device {node.id} exhausted its battery in round {self.round_number}")

    # -- radio ----------------------------------------------------------------

    def bandwidth_between(self, a: NodeState, b: NodeState) -> float:
        if a.role is not Role.DEVICE and b.role is not Role.DEVICE:
            return self.config.backhaul_bandwidth
        return self.radio.bandwidth

    def hop_latency(self, bits: float, a: NodeState, b: NodeState) -> float:
        return per_hop_latency(bits, distance(a, b), self.bandwidth_between(a, b), self.config.proc_delay)

    def drop(self, packet: Packet, reason: DropReason) -> None:
        packet.drop(reason)
        self.ledger.record_drop(reason)

    def run_radio(
        self,
        packets: Iterable[Packet],
        next_hop: Callable[[Packet], int | None],
        sinks: set[int],
    ) -> list[Packet]:
        """Carry packets hop by hop until they reach a sink or drop.

        Events run in (time, node id, packet id) order; every receiver serves
        one frame at a time, so a hop starts once the receiver is free. Busy
        receivers stay busy across the round boundary.
        """
        queue = [(p.hop_times[-1], p.path[-1], p.id, p) for p in packets if not p.dropped]
        heapq.heapify(queue)
        arrived = []
        while queue:
            ready, sender_id, _, packet = heapq.heappop(queue)
            receiver_id = next_hop(packet)
            if receiver_id is None:
                self.drop(packet, DropReason.NO_ROUTE)
                continue
            arrival = self._hop(packet, self.nodes[sender_id], self.nodes[receiver_id], ready)
            if arrival is None:
                continue
            if receiver_id in sinks:
                arrived.append(packet)
            else:
                heapq.heappush(queue, (arrival, receiver_id, packet.id, packet))
        return arrived

    def _hop(self, packet: Packet, sender: NodeState, receiver: NodeState, ready: float) -> float | None:
        d = distance(sender, receiver)
        if not self.charge(sender, tx_energy(self.radio, packet.bits, d)):
            self.drop(packet, DropReason.DEAD_NODE)
            return None
        airtime = packet.bits / self.bandwidth_between(sender, receiver)
        start = max(ready, self._rx_free.get(receiver.id, ready))
        self._rx_free[receiver.id] = start + airtime
        self.clock.observe(start)
        arrival = start + airtime + d / SPEED_OF_LIGHT + self.config.proc_delay
        if not receiver.alive:
            self.drop(packet, DropReason.DEAD_NODE)
            return None
        success = link_success_probability(
            rssi(self.radio, d, receiver.noise_figure),
            self.radio.rx_sensitivity,
            self.config.base_loss,
        )
        if not self.rng.bernoulli(success):
            self.drop(packet, DropReason.LINK_LOSS)
            return None
        if not self.charge(receiver, rx_energy(self.radio, packet.bits)):
            self.drop(packet, DropReason.DEAD_NODE)
            return None
        packet.path.append(receiver.id)
        packet.hop_times.append(arrival)
        return arrival

    def deliver(self, packet: Packet, at: float) -> None:
        """Mark arrival at the cloud and close the loop with the cloud's response."""
        packet.delivered_at = at
        back = 0.0
        route = packet.path[::-1]
        for a, b in zip(route, route[1:]):
            back += self.hop_latency(self.config.header_bits, self.nodes[a], self.nodes[b])
        packet.response_at = at + self.config.cloud_processing + back

    # -- accounting -----------------------------------------------------------

    def end_round(self) -> None:
        ledger = self.ledger
        first_copy: dict[int, Packet] = {}
        delivered: dict[int, Packet] = {}
        for packet in self.round_packets:
            first_copy.setdefault(packet.payload_id, packet)
            if packet.delivered_at is None:
                continue
            best = delivered.get(packet.payload_id)
            if best is None or (packet.delivered_at, packet.id) < (best.delivered_at, best.id):
                delivered[packet.payload_id] = packet
        ledger.sent += len(first_copy)
        for payload_id in sorted(delivered):
            packet = delivered[payload_id]
            ledger.delivered += 1
            ledger.sum_delay += packet.delivered_at - packet.created_at
            ledger.sum_response += packet.response_at - packet.created_at

        alive = len(self.alive_devices())
        ledger.alive_curve.append(alive)
        if ledger.first_node_death_round is None and ledger.death_rounds:
            ledger.first_node_death_round = min(ledger.death_rounds.values())
        ledger.rounds.append(
            RoundRecord(
                round=self.round_number,
                alive=alive,
                sent=ledger.sent,
                delivered=ledger.delivered,
                pdr=ledger.delivered / ledger.sent if ledger.sent else None,
                mean_delay_s=ledger.sum_delay / ledger.delivered if ledger.delivered else None,
                mean_response_s=ledger.sum_response / ledger.delivered if ledger.delivered else None,
                energy_j=ledger.energy_consumed,
            )
        )
        self.clock.advance()
