"""Node and whole-graph measures on frozen snapshots.

Topological overlap of node ``i`` between an earlier and a later snapshot::

    C_i = sum_j a_ij(t0) * a_ij(t1) / sqrt(sum_j a_ij(t0) * sum_k a_ik(t1))

where ``a`` is the weighted adjacency (or its 0/1 binarization) restricted to
the chosen direction.  The score is undefined unless both sums are positive.
Undefined scores are reported as such and never coerced to zero.

Transitivity and average path length use the undirected, unweighted
projection of a snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import ValidationError
from .graph import Snapshot


class Mode(str, Enum):
    BINARY = "binary"
    WEIGHTED = "weighted"


class Direction(str, Enum):
    """Which adjacency entries of a node take part in an overlap sum.

    ``BOTH`` concatenates the out-row and the in-column, so an out-link and
    an in-link to the same city count as two separate entries.
    """

    OUT = "out"
    IN = "in"
    BOTH = "both"


class DegreeDirection(str, Enum):
    OUT = "out"
    IN = "in"
    TOTAL = "total"


def _coerce(enum_cls, value):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise ValidationError(f"{value!r} is not one of: {allowed}") from None


def _check_pair(s1: Snapshot, s2: Snapshot):
    s1.require_frozen()
    s2.require_frozen()
    if s1.registry is not s2.registry:
        raise ValidationError("snapshots must share one node registry")


# -- degree centrality -----------------------------------------------------


def degree_centrality(snapshot: Snapshot, mode="weighted", direction="total") -> dict[int, int]:
    """Degree (binary) or strength (weighted) of every registered node.

    Nodes that are registered but have no edges in ``snapshot`` map to 0.
    """
    snapshot.require_frozen()
    mode = _coerce(Mode, mode)
    direction = _coerce(DegreeDirection, direction)
    binary = mode is Mode.BINARY

    def size(row):
        return len(row) if binary else sum(row.values())

    result = {}
    for node in snapshot.registry:
        value = 0
        if direction is not DegreeDirection.IN:
            value += size(snapshot.out_row(node))
        if direction is not DegreeDirection.OUT:
            value += size(snapshot.in_row(node))
        result[node] = value
    return result


# -- topological overlap ---------------------------------------------------


@dataclass(frozen=True)
class OverlapScore:
    node: int
    value: float | None
    mode: Mode
    direction: Direction
    defined: bool
    reason: str | None = None


def _links(snapshot: Snapshot, node: int, direction: Direction) -> dict:
    if direction is Direction.OUT:
        return snapshot.out_row(node)
    if direction is Direction.IN:
        return snapshot.in_row(node)
    both = {("out", j): w for j, w in snapshot.out_row(node).items()}
    both.update({("in", j): w for j, w in snapshot.in_row(node).items()})
    return both


def _score(node, a: dict, b: dict, mode: Mode, direction: Direction) -> OverlapScore:
    if mode is Mode.BINARY:
        sum_a, sum_b = len(a), len(b)
    else:
        sum_a, sum_b = sum(a.values()), sum(b.values())
    if sum_a <= 0 or sum_b <= 0:
        if sum_a <= 0 and sum_b <= 0:
            reason = "no links in either snapshot"
        elif sum_a <= 0:
            reason = "no links in earlier snapshot"
        else:
            reason = "no links in later snapshot"
        return OverlapScore(node, None, mode, direction, False, reason)

    small, large = (a, b) if len(a) <= len(b) else (b, a)
    if mode is Mode.BINARY:
        shared = sum(1 for j in small if j in large)
    else:
        shared = sum(w * large[j] for j, w in small.items() if j in large)
    # Integer product keeps sqrt correctly rounded: identical sets give exactly 1.
    value = shared / math.sqrt(sum_a * sum_b)
    return OverlapScore(node, value, mode, direction, True)


def topological_overlap(s1: Snapshot, s2: Snapshot, node: int, mode="weighted", direction="out") -> OverlapScore:
    """Overlap of one node's links between ``s1`` (earlier) and ``s2`` (later)."""
    _check_pair(s1, s2)
    mode = _coerce(Mode, mode)
    direction = _coerce(Direction, direction)
    s1.registry.check(node)
    return _score(node, _links(s1, node, direction), _links(s2, node, direction), mode, direction)


def topological_overlap_all(s1: Snapshot, s2: Snapshot, mode="weighted", direction="out") -> dict[int, OverlapScore]:
    """Scores for every registered node, keyed in ascending id order."""
    _check_pair(s1, s2)
    mode = _coerce(Mode, mode)
    direction = _coerce(Direction, direction)
    return {
        node: _score(node, _links(s1, node, direction), _links(s2, node, direction), mode, direction)
        for node in s1.registry
    }


# -- global statistics -----------------------------------------------------


def undirected_projection(snapshot: Snapshot) -> tuple[sparse.csr_matrix, list[int]]:
    """Symmetric 0/1 adjacency over the snapshot's member nodes.

    Returns the matrix and the node id for each row.
    """
    nodes = snapshot.nodes()
    index = {node: i for i, node in enumerate(nodes)}
    n = len(nodes)
    pairs = np.array([(index[s], index[d]) for s, d, _ in snapshot.edges()], dtype=np.int64).reshape(-1, 2)
    src, dst = pairs[:, 0], pairs[:, 1]
    ones = np.ones(len(src), dtype=np.int64)
    adj = sparse.coo_matrix((ones, (src, dst)), shape=(n, n)).tocsr()
    adj = (adj + adj.T).tocsr()
    adj.data[:] = 1
    return adj, nodes


def transitivity(snapshot: Snapshot) -> float:
    """Global clustering: 3 * triangles / connected triplets, 0 without triplets."""
    snapshot.require_frozen()
    adj, _ = undirected_projection(snapshot)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    # Each triangle closes 6 ordered 2-paths; each triplet is 2 of them.
    triplets2 = int(np.sum(deg * (deg - 1)))
    if triplets2 == 0:
        return 0.0
    closed = int((adj @ adj).multiply(adj).sum())
    return closed / triplets2


def largest_component(adj: sparse.csr_matrix) -> np.ndarray:
    """Row indices of the largest connected component (lowest label on ties)."""
    if adj.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    _, labels = csgraph.connected_components(adj, directed=False)
    sizes = np.bincount(labels)
    return np.flatnonzero(labels == int(np.argmax(sizes)))


def average_path_length(snapshot: Snapshot, chunk: int = 512) -> float:
    """Mean hop distance over ordered pairs inside the largest component.

    Breadth-first search from ``chunk`` sources at once: each level expands
    the frontier block with one sparse-dense product.
    """
    snapshot.require_frozen()
    adj, _ = undirected_projection(snapshot)
    members = largest_component(adj)
    n = len(members)
    if n < 2:
        return 0.0
    sub = adj[members][:, members].astype(np.float32).tocsr()
    total = 0
    for start in range(0, n, chunk):
        sources = np.arange(start, min(start + chunk, n))
        frontier = np.zeros((n, len(sources)), dtype=np.float32)
        frontier[sources, np.arange(len(sources))] = 1.0
        seen = frontier > 0
        level = 0
        while True:
            level += 1
            reached = (sub @ frontier > 0) & ~seen
            count = int(reached.sum())
            if count == 0:
                break
            total += level * count
            seen |= reached
            frontier = reached.astype(np.float32)
    return total / (n * (n - 1))


def truncate(value: float, places: int) -> str:
    """Cut a value to ``places`` decimals without rounding up (Table 1 style)."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_DOWN))


@dataclass(frozen=True)
class NetworkStats:
    node_count: int
    edge_count: int
    edge_node_ratio: float
    highest_degree: int
    average_path_length: float
    transitivity: float

    def rows(self) -> list[tuple[str, object]]:
        """Full-precision ``(metric, value)`` pairs."""
        return [
            ("Nodes", self.node_count),
            ("Edges", self.edge_count),
            ("Edge-Node Ratio", self.edge_node_ratio),
            ("Highest Degree", self.highest_degree),
            ("Average Path Length", self.average_path_length),
            ("Transitivity", self.transitivity),
        ]

    def display_rows(self) -> list[tuple[str, str]]:
        """Rows cut to the decimals used for published network summaries."""
        return [
            ("Nodes", str(self.node_count)),
            ("Edges", str(self.edge_count)),
            ("Edge-Node Ratio", truncate(self.edge_node_ratio, 2)),
            ("Highest Degree", str(self.highest_degree)),
            ("Average Path Length", truncate(self.average_path_length, 2)),
            ("Transitivity", truncate(self.transitivity, 3)),
        ]


def network_stats(snapshot: Snapshot, degree_mode="binary", degree_direction="total") -> NetworkStats:
    """Six summary metrics; ``highest_degree`` defaults to binary in+out degree."""
    snapshot.require_frozen()
    nodes, edges = snapshot.node_count, snapshot.edge_count
    degrees = degree_centrality(snapshot, degree_mode, degree_direction)
    members = snapshot.nodes()
    return NetworkStats(
        node_count=nodes,
        edge_count=edges,
        edge_node_ratio=edges / nodes if nodes else 0.0,
        highest_degree=max((degrees[n] for n in members), default=0),
        average_path_length=average_path_length(snapshot),
        transitivity=transitivity(snapshot),
    )
