"""Balanced b-ary fog hierarchy rooted at the cloud and upward aggregation."""

from collections.abc import Callable, Mapping

from app.exceptions.simulation_exceptions import StructuralError
from app.schemas.fog_tree import FogPayload, FogTree, UpwardTransmission
from app.schemas.node import NodeState
from app.services.radio import distance


def build_balanced_tree(fogs: list[NodeState], cloud: NodeState, b: int = 2) -> FogTree:
    """Level-order fill of a complete b-ary tree, closest fog on top.

    The closest fog is the cloud's only fog child; fog i (0-based, in order of
    distance to the cloud, ties by id) hangs under fog (i - 1) // b.
    """
    if b < 1:
        raise StructuralError(f"branching must be >= 1, got {b}")
    ordered = sorted(fogs, key=lambda fog: (distance(fog, cloud), fog.id))
    parent: dict[int, int] = {}
    depth: dict[int, int] = {}
    edge_length: dict[int, float] = {}
    for index, fog in enumerate(ordered):
        if index == 0:
            up = cloud
            depth[fog.id] = 1
        else:
            up = ordered[(index - 1) // b]
            depth[fog.id] = depth[up.id] + 1
        parent[fog.id] = up.id
        edge_length[fog.id] = distance(fog, up)
    return FogTree(
        root=cloud.id,
        branching=b,
        parent=parent,
        depth=depth,
        order=tuple(fog.id for fog in ordered),
        edge_length=edge_length,
    )


def path_to_root(tree: FogTree, fog: int) -> list[int]:
    if fog not in tree.parent:
        raise StructuralError(f"fog {fog} is not part of the tree")
    path = [fog]
    while path[-1] != tree.root:
        path.append(tree.parent[path[-1]])
        if len(path) > len(tree.parent) + 1:
            raise StructuralError(f"cycle detected above fog {fog}")
    return path


def aggregate_upward(
    tree: FogTree,
    packets_at_fog: Mapping[int, list[FogPayload]],
    latency: Callable[[float, float], float],
    header_bits: float = 200.0,
    aggregation_ratio: float = 1.0,
) -> list[UpwardTransmission]:
    """Bottom-up schedule of one aggregated upward packet per fog.

    ``latency(bits, d)`` gives the hop time over a fog link. A fog departs once
    its last local payload and its last child aggregate have arrived; payloads
    seen twice (overlap copies) are merged keeping the earliest.
    """
    carried: dict[int, dict[int, tuple[float, float]]] = {}
    ready: dict[int, float] = {}
    for fog, payloads in packets_at_fog.items():
        if fog not in tree.parent:
            raise StructuralError(f"payloads handed to unknown fog {fog}")
        bucket = carried.setdefault(fog, {})
        for payload in payloads:
            _merge(bucket, payload.payload_id, payload.bits, payload.ready_at)
            ready[fog] = max(ready.get(fog, payload.ready_at), payload.ready_at)

    schedule = []
    for fog in sorted(tree.order, key=lambda f: (-tree.depth[f], f)):
        bucket = carried.get(fog)
        if not bucket:
            continue
        raw_bits = sum(bits for bits, _ in bucket.values())
        bits = header_bits + aggregation_ratio * raw_bits
        depart = ready[fog]
        arrive = depart + latency(bits, tree.edge_length[fog])
        up = tree.parent[fog]
        schedule.append(
            UpwardTransmission(
                src=fog,
                dst=up,
                payload_ids=tuple(sorted(bucket)),
                raw_bits=raw_bits,
                bits=bits,
                depart_at=depart,
                arrive_at=arrive,
            )
        )
        if up != tree.root:
            parent_bucket = carried.setdefault(up, {})
            for payload_id, (payload_bits, _) in bucket.items():
                _merge(parent_bucket, payload_id, payload_bits, arrive)
            ready[up] = max(ready.get(up, arrive), arrive)
    return schedule


def _merge(bucket: dict[int, tuple[float, float]], payload_id: int, bits: float, at: float) -> None:
    known = bucket.get(payload_id)
    if known is None or at < known[1]:
        bucket[payload_id] = (bits, at)


def export_parent_list(tree: FogTree) -> str:
    lines = [f"cloud {tree.root} branching={tree.branching} max_depth={tree.max_depth}"]
    for fog in tree.order:
        lines.append(f"fog {fog} -> {tree.parent[fog]} depth={tree.depth[fog]}")
    return "\n".join(lines)
