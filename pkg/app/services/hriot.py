"""The two-phase HR-IoT round: overlapping clustering up to the fogs, then the
balanced fog tree up to the cloud."""

import logging

from app.exceptions.simulation_exceptions import NoRouteError
from app.schemas.cluster import Cluster
from app.schemas.fog_tree import FogPayload
from app.schemas.packet import DropReason, Packet
from app.services.clustering import (
    choose_uplink_cluster,
    elect_cluster_heads,
    form_overlapping_clusters,
    intra_cluster_route,
    sample_cluster_links,
)
from app.services.fog_tree import aggregate_upward, path_to_root
from app.services.simulation import SimulationState, per_hop_latency

logger = logging.getLogger(__name__)


def recluster(state: SimulationState) -> None:
    state.epoch += 1
    clusters, membership = form_overlapping_clusters(state.nodes, state.epoch)
    links = sample_cluster_links(clusters, state.nodes, state.radio)
    state.clusters = elect_cluster_heads(
        clusters, state.nodes, links, state.epoch, state.config.election
    )
    state.membership = membership
    state.uplinks = {}
    for device in sorted(membership.memberships):
        covering = [c for c in state.clusters if c.covers(device)]
        if not covering:
            continue
        state.uplinks[device] = choose_uplink_cluster(
            device, covering, state.nodes, state.radio, state.config.election
        ).fog_anchor
    logger.debug(
        f"Round {state.round_number}: epoch {state.epoch} elected "
        f"{len(state.clusters)} heads, {len(membership.uncovered)} devices uncovered"
    )


def _head_lost(state: SimulationState) -> bool:
    return any(c.head is not None and not state.nodes[c.head].alive for c in state.clusters)


def run_round_hriot(state: SimulationState) -> SimulationState:
    state.begin_round()
    if not state.clusters or state.election_due() or _head_lost(state):
        recluster(state)
    by_fog: dict[int, Cluster] = {c.fog_anchor: c for c in state.clusters}

    routes: dict[int, list[int]] = {}
    outbound: list[Packet] = []
    for packet in state.generate_packets():
        device = packet.src_device
        if device not in state.uplinks:
            state.drop(packet, DropReason.NO_ROUTE)
            continue
        if state.config.duplicate_to_all_overlaps:
            targets = [c for c in state.clusters if c.covers(device)]
        else:
            targets = [by_fog[state.uplinks[device]]]
        for index, cluster in enumerate(targets):
            copy = packet if index == 0 else state.copy_packet(packet)
            try:
                routes[copy.id] = intra_cluster_route(device, cluster)
            except NoRouteError:
                state.drop(copy, DropReason.NO_ROUTE)
                continue
            outbound.append(copy)

    at_fogs = state.run_radio(
        outbound,
        next_hop=lambda p: routes[p.id][len(p.path)],
        sinks=set(state.fog_ids),
    )
    forward_to_cloud(state, at_fogs)
    return state


def forward_to_cloud(state: SimulationState, at_fogs: list[Packet]) -> None:
    packets_at_fog: dict[int, list[FogPayload]] = {}
    for packet in at_fogs:
        packets_at_fog.setdefault(packet.path[-1], []).append(
            FogPayload(payload_id=packet.payload_id, bits=packet.bits, ready_at=packet.hop_times[-1])
        )
    state.fog_handoff = {p.payload_id for p in at_fogs}
    backhaul = state.config.backhaul_bandwidth
    proc_delay = state.config.proc_delay
    schedule = aggregate_upward(
        state.tree,
        packets_at_fog,
        latency=lambda bits, d: per_hop_latency(bits, d, backhaul, proc_delay),
        header_bits=state.config.header_bits,
        aggregation_ratio=state.config.aggregation_ratio,
    )
    arrivals = {t.src: t.arrive_at for t in schedule}
    state.cloud_payloads = {
        payload_id
        for transmission in schedule
        if transmission.dst == state.tree.root
        for payload_id in transmission.payload_ids
    }

    for packet in sorted(at_fogs, key=lambda p: p.id):
        chain = path_to_root(state.tree, packet.path[-1])
        for fog, up in zip(chain, chain[1:]):
            packet.path.append(up)
            packet.hop_times.append(arrivals[fog])
        state.deliver(packet, packet.hop_times[-1])
