"""Overlapping fog-anchored clustering and grey cluster-head election."""

import logging
from collections.abc import Mapping

from app.exceptions.simulation_exceptions import ConfigurationError, NoRouteError
from app.schemas.cluster import Cluster, MembershipMap
from app.schemas.decision import CriterionSpec, DecisionMatrix, Direction
from app.schemas.node import NodeState, Role
from app.schemas.radio import LinkSample, RadioModel
from app.schemas.scenario import ElectionSettings
from app.services.grey_relational import rank_candidates
from app.services.radio import distance, link_range, sample_link

logger = logging.getLogger(__name__)

CH_CRITERIA = (
    ("residual_energy", Direction.BENEFIT),
    ("rssi", Direction.BENEFIT),
    ("link_expiration_time", Direction.BENEFIT),
    ("distance", Direction.COST),
    ("hop_estimate", Direction.COST),
    ("noise_figure", Direction.COST),
)

# relative slack when comparing residual energy against the cluster mean
_MEAN_ENERGY_SLACK = 1e-9


def criteria_for(settings: ElectionSettings) -> list[CriterionSpec]:
    return [
        CriterionSpec(name=name, direction=direction, weight=weight)
        for (name, direction), weight in zip(CH_CRITERIA, settings.weights)
    ]


def form_overlapping_clusters(
    nodes: Mapping[int, NodeState], epoch: int = 0
) -> tuple[list[Cluster], MembershipMap]:
    fog_nodes = sorted((n for n in nodes.values() if n.role is Role.FOG), key=lambda n: n.id)
    if not fog_nodes:
        raise ConfigurationError("clustering needs at least one fog node", key="fog_count")
    alive = sorted(
        (n for n in nodes.values() if n.role is Role.DEVICE and n.alive), key=lambda n: n.id
    )

    memberships: dict[int, tuple[int, ...]] = {}
    for device in alive:
        reachable = tuple(
            fog.id for fog in fog_nodes if distance(device, fog) <= link_range(device, fog)
        )
        if reachable:
            memberships[device.id] = reachable

    covered = [device for device in alive if device.id in memberships]
    relays: dict[int, int] = {}
    uncovered: set[int] = set()
    for orphan in alive:
        if orphan.id in memberships:
            continue
        in_reach = [
            (distance(orphan, device), device.id)
            for device in covered
            if distance(orphan, device) <= link_range(orphan, device)
        ]
        if in_reach:
            relays[orphan.id] = min(in_reach)[1]
        else:
            uncovered.add(orphan.id)
    for orphan, relay in relays.items():
        memberships[orphan] = memberships[relay]

    clusters = []
    for fog in fog_nodes:
        members = frozenset(d for d, fog_ids in memberships.items() if fog.id in fog_ids and d not in relays)
        relayed = {o: r for o, r in sorted(relays.items()) if r in members}
        clusters.append(Cluster(fog_anchor=fog.id, members=members, relayed=relayed, epoch=epoch))
    logger.debug(
        f"Formed {len(clusters)} clusters: {len(memberships)} covered, "
        f"{len(relays)} relayed, {len(uncovered)} uncovered"
    )
    return clusters, MembershipMap(memberships=memberships, uncovered=frozenset(uncovered))


def sample_cluster_links(
    clusters: list[Cluster], nodes: Mapping[int, NodeState], radio: RadioModel
) -> dict[tuple[int, int], LinkSample]:
    links = {}
    for cluster in clusters:
        fog = nodes[cluster.fog_anchor]
        for member in sorted(cluster.members):
            links[(member, fog.id)] = sample_link(nodes[member], fog, radio)
    return links


def build_ch_decision_matrix(
    cluster: Cluster,
    nodes: Mapping[int, NodeState],
    links: Mapping[tuple[int, int], LinkSample],
    settings: ElectionSettings,
    candidates: list[int] | None = None,
) -> DecisionMatrix:
    rows = sorted(cluster.members) if candidates is None else sorted(candidates)
    values = []
    for member in rows:
        link = links[(member, cluster.fog_anchor)]
        node = nodes[member]
        values.append(
            [
                node.residual_energy,
                link.rssi,
                min(link.let, settings.let_cap),
                link.distance,
                float(link.hop_estimate),
                node.noise_figure,
            ]
        )
    return DecisionMatrix(
        candidates=rows, criteria=criteria_for(settings), values=values, rho=settings.rho
    )


def elect_cluster_heads(
    clusters: list[Cluster],
    nodes: Mapping[int, NodeState],
    links: Mapping[tuple[int, int], LinkSample],
    epoch: int,
    settings: ElectionSettings,
) -> list[Cluster]:
    """Elect one head per cluster; a device heads at most one cluster."""
    taken: set[int] = set()
    elected = []
    for cluster in sorted(clusters, key=lambda c: c.fog_anchor):
        alive = sorted(m for m in cluster.members if nodes[m].alive)
        if not alive:
            logger.warning(f"Dropping empty cluster of fog {cluster.fog_anchor} at epoch {epoch}")
            continue
        candidates = [m for m in alive if m not in taken] or alive
        if settings.candidate_filter == "mean_energy":
            candidates = _above_mean_energy(candidates, alive, nodes)
        ranking = rank_candidates(
            build_ch_decision_matrix(cluster, nodes, links, settings, candidates)
        )
        winner = ranking[0]
        taken.add(winner.candidate)
        elected.append(
            Cluster(
                fog_anchor=cluster.fog_anchor,
                members=cluster.members,
                relayed=cluster.relayed,
                head=winner.candidate,
                head_grade=winner.grade,
                epoch=epoch,
            )
        )
    logger.debug(f"Epoch {epoch} heads: {[(c.fog_anchor, c.head) for c in elected]}")
    return elected


def _above_mean_energy(
    candidates: list[int], alive: list[int], nodes: Mapping[int, NodeState]
) -> list[int]:
    mean = sum(nodes[m].residual_energy for m in alive) / len(alive)
    threshold = mean * (1.0 - _MEAN_ENERGY_SLACK)
    eligible = [m for m in candidates if nodes[m].residual_energy >= threshold]
    return eligible or candidates


def intra_cluster_route(device: int, cluster: Cluster) -> list[int]:
    if cluster.head is None:
        raise NoRouteError(f"cluster of fog {cluster.fog_anchor} has no head", device=device)
    if device == cluster.head:
        return [cluster.head, cluster.fog_anchor]
    if device in cluster.members:
        return [device, cluster.head, cluster.fog_anchor]
    if device in cluster.relayed:
        relay = cluster.relayed[device]
        if relay == cluster.head:
            return [device, relay, cluster.fog_anchor]
        return [device, relay, cluster.head, cluster.fog_anchor]
    raise NoRouteError(f"device {device} is not covered by fog {cluster.fog_anchor}", device=device)


def choose_uplink_cluster(
    device: int,
    clusters: list[Cluster],
    nodes: Mapping[int, NodeState],
    radio: RadioModel,
    settings: ElectionSettings,
) -> Cluster:
    """Pick the one cluster a device sends through when it sits in several.

    Heads are ranked by grey relational grade from the sender's point of view;
    an orphan looks through its relay.
    """
    headed = [c for c in clusters if c.head is not None]
    if not headed:
        raise NoRouteError(f"no elected cluster covers device {device}", device=device)
    for cluster in headed:
        if cluster.head == device:
            return cluster
    if len(headed) == 1:
        return headed[0]
    viewpoint = nodes[headed[0].relayed.get(device, device)]
    for cluster in headed:
        if cluster.head == viewpoint.id:
            return cluster
    values = []
    for cluster in headed:
        head = nodes[cluster.head]
        to_head = sample_link(viewpoint, head, radio)
        to_fog = sample_link(head, nodes[cluster.fog_anchor], radio)
        values.append(
            [
                head.residual_energy,
                to_head.rssi,
                min(to_head.let, settings.let_cap),
                to_head.distance,
                float(to_head.hop_estimate + to_fog.hop_estimate),
                head.noise_figure,
            ]
        )
    matrix = DecisionMatrix(
        candidates=[c.fog_anchor for c in headed],
        criteria=criteria_for(settings),
        values=values,
        rho=settings.rho,
    )
    best = rank_candidates(matrix)[0].candidate
    return next(c for c in headed if c.fog_anchor == best)
