"""Trend-level comparison protocols: direct transmission, EECRP-like and
ERGID-like. These are simplified "-like" variants, not faithful ports."""

import logging
import math
from collections import deque

from app.core.random import PortableRandom
from app.schemas.packet import Packet
from app.services.radio import distance, link_range
from app.services.simulation import SimulationState, per_hop_latency

logger = logging.getLogger(__name__)


def run_round_direct(state: SimulationState) -> SimulationState:
    state.begin_round()
    cloud = state.cloud_id
    state.run_radio(state.generate_packets(), next_hop=lambda p: cloud, sinks={cloud})
    _deliver_at_cloud(state)
    return state


# -- EECRP-like -------------------------------------------------------------


def _nearest_centroid(position: tuple[float, float], centroids: list[tuple[float, float]]) -> int:
    return min(
        range(len(centroids)),
        key=lambda i: (math.hypot(position[0] - centroids[i][0], position[1] - centroids[i][1]), i),
    )


def eecrp_head_score(residual_energy: float, distance_to_centroid: float) -> float:
    return residual_energy / (1.0 + distance_to_centroid)


def _repartition(state: SimulationState, update_centroids: bool) -> None:
    aux = state.baseline
    alive = state.alive_devices()
    if not aux.centroids:
        aux.centroids = [state.nodes[f].position for f in state.fog_ids] or [
            state.nodes[state.cloud_id].position
        ]
    elif update_centroids:
        # one Lloyd step from the previous partition's surviving members
        moved = []
        for centroid, members in zip(aux.centroids, aux.partitions):
            survivors = [state.nodes[m] for m in members if state.nodes[m].alive]
            if survivors:
                moved.append(
                    (
                        sum(n.position[0] for n in survivors) / len(survivors),
                        sum(n.position[1] for n in survivors) / len(survivors),
                    )
                )
            else:
                moved.append(centroid)
        aux.centroids = moved

    partitions: list[list[int]] = [[] for _ in aux.centroids]
    for device in alive:
        partitions[_nearest_centroid(device.position, aux.centroids)].append(device.id)
    aux.partitions = partitions
    aux.heads = {}
    for index, members in enumerate(partitions):
        if not members:
            continue
        cx, cy = aux.centroids[index]
        ranked = sorted(
            members,
            key=lambda m: (
                -eecrp_head_score(
                    state.nodes[m].residual_energy,
                    math.hypot(state.nodes[m].position[0] - cx, state.nodes[m].position[1] - cy),
                ),
                m,
            ),
        )
        aux.heads[index] = ranked[0]


def run_round_eecrp_like(state: SimulationState) -> SimulationState:
    state.begin_round()
    aux = state.baseline
    due = state.election_due()
    if due or not aux.partitions or any(not state.nodes[h].alive for h in aux.heads.values()):
        _repartition(state, update_centroids=due)

    head_of = {m: aux.heads[i] for i, members in enumerate(aux.partitions) for m in members if i in aux.heads}
    cloud = state.cloud_id

    def next_hop(packet: Packet) -> int | None:
        here = packet.path[-1]
        head = head_of.get(packet.src_device)
        if head is None:
            return None
        return head if here != head else cloud

    state.run_radio(state.generate_packets(), next_hop=next_hop, sinks={cloud})
    _deliver_at_cloud(state)
    return state


# -- ERGID-like -------------------------------------------------------------


def select_next_hop(
    candidates: list[tuple[int, float, float]], rng: PortableRandom
) -> int | None:
    """Residual-energy-proportional pick among the lowest-delay candidates.

    ``candidates`` holds (node id, estimated remaining delay, residual energy).
    """
    if not candidates:
        return None
    best = min(delay for _, delay, _ in candidates)
    tier = sorted((c for c in candidates if c[1] == best), key=lambda c: c[0])
    if len(tier) == 1:
        return tier[0][0]
    if any(math.isinf(energy) for _, _, energy in tier):
        return next(node for node, _, energy in tier if math.isinf(energy))
    total = sum(energy for _, _, energy in tier)
    if total <= 0.0:
        return tier[0][0]
    target = rng.random() * total
    cumulative = 0.0
    for node, _, energy in tier:
        cumulative += energy
        if target < cumulative:
            return node
    return tier[-1][0]


def _refresh_neighbor_graph(state: SimulationState) -> None:
    aux = state.baseline
    members = [n for n in state.alive_devices()] + [state.nodes[state.cloud_id]]
    neighbors: dict[int, list[int]] = {n.id: [] for n in members}
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if distance(a, b) <= link_range(a, b):
                neighbors[a.id].append(b.id)
                neighbors[b.id].append(a.id)
    hops = {state.cloud_id: 0}
    frontier = deque([state.cloud_id])
    while frontier:
        here = frontier.popleft()
        for nxt in neighbors[here]:
            if nxt not in hops:
                hops[nxt] = hops[here] + 1
                frontier.append(nxt)
    # remaining-delay estimate: hop count times the mean per-hop latency
    mean_hop = per_hop_latency(
        state.config.packet_bits, 0.0, state.radio.bandwidth, state.config.proc_delay
    )
    aux.neighbors = neighbors
    aux.hops_to_cloud = hops
    aux.delay_estimates = {node: count * mean_hop for node, count in hops.items()}


def ergid_next_hop(state: SimulationState, packet: Packet, ttl: int) -> int | None:
    """Next forwarder for ``packet`` or None when its TTL is spent or no unvisited neighbor is left."""
    if len(packet.path) - 1 >= ttl:
        return None
    aux = state.baseline
    visited = set(packet.path)
    candidates = []
    for node_id in aux.neighbors.get(packet.path[-1], []):
        node = state.nodes[node_id]
        if node_id in visited or node_id not in aux.delay_estimates or not node.alive:
            continue
        energy = node.residual_energy if node.battery_powered else math.inf
        candidates.append((node_id, aux.delay_estimates[node_id], energy))
    return select_next_hop(candidates, state.rng)


def run_round_ergid_like(state: SimulationState) -> SimulationState:
    state.begin_round()
    _refresh_neighbor_graph(state)
    ttl = len(state.device_ids)
    cloud = state.cloud_id
    state.run_radio(
        state.generate_packets(),
        next_hop=lambda p: ergid_next_hop(state, p, ttl),
        sinks={cloud},
    )
    _deliver_at_cloud(state)
    return state


def _deliver_at_cloud(state: SimulationState) -> None:
    for packet in state.round_packets:
        if not packet.dropped and packet.path[-1] == state.cloud_id:
            state.deliver(packet, packet.hop_times[-1])
            state.cloud_payloads.add(packet.payload_id)
