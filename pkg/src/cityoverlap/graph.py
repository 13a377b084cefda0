"""Weighted directed simple graphs of cities, one per time point.

A :class:`NodeRegistry` maps city labels to dense integer ids and is shared
between the snapshots being compared, so the same city has the same id in
every snapshot.  A :class:`Snapshot` is built by repeated
:meth:`Snapshot.upsert_edge` calls and then frozen; every metric requires a
frozen snapshot.

Edge-list files are UTF-8 CSV with a ``src,dst,weight`` header.  Lines that
start with ``#`` are comments for generic readers.  Two comment directives
are understood by :func:`read_edgelist` so that a written snapshot reads
back exactly::

    # snapshot: 2010
    # isolated: Reykjavik
"""

from __future__ import annotations

import csv
import io
import os
from typing import Iterable, Iterator, TextIO

from .errors import (
    FormatError,
    NodeLookupError,
    SelfLoopError,
    SnapshotStateError,
    ValidationError,
)

EDGELIST_HEADER = ("src", "dst", "weight")
_SNAPSHOT_DIRECTIVE = "# snapshot:"
_ISOLATED_DIRECTIVE = "# isolated:"


def normalize_label(label: str) -> str:
    """Trim surrounding whitespace; case is preserved."""
    if not isinstance(label, str):
        raise ValidationError(f"node label must be text, got {type(label).__name__}")
    cleaned = label.strip()
    if not cleaned:
        raise ValidationError("node label is empty")
    return cleaned


class NodeRegistry:
    """Bijection between city labels and dense ids ``0..n-1``."""

    def __init__(self, labels: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._labels: list[str] = []
        for label in labels:
            self.register(label)

    def register(self, label: str) -> int:
        """Return the id of ``label``, assigning the next free id if new."""
        label = normalize_label(label)
        node = self._ids.get(label)
        if node is None:
            node = len(self._labels)
            self._ids[label] = node
            self._labels.append(label)
        return node

    def id_of(self, label: str) -> int:
        try:
            return self._ids[label.strip()]
        except KeyError:
            raise NodeLookupError(f"unknown node label {label!r}") from None

    def label_of(self, node: int) -> str:
        if not 0 <= node < len(self._labels):
            raise NodeLookupError(f"unknown node id {node}")
        return self._labels[node]

    def check(self, node: int) -> int:
        if not (isinstance(node, int) and 0 <= node < len(self._labels)):
            raise NodeLookupError(f"unknown node id {node!r}")
        return node

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._labels)

    def __contains__(self, label) -> bool:
        return isinstance(label, str) and label.strip() in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self._labels)))

    def __repr__(self):
        return f"NodeRegistry({len(self)} nodes)"


def register_node(registry: NodeRegistry, label: str) -> int:
    return registry.register(label)


class Snapshot:
    """City network at one time point.

    Nodes belonging to the snapshot are tracked separately from the shared
    registry, so a city known only to a later snapshot is not counted here.
    """

    def __init__(self, label: str, registry: NodeRegistry | None = None):
        self.label = str(label)
        self.registry = registry if registry is not None else NodeRegistry()
        self._nodes: set[int] = set()
        self._out: dict[int, dict[int, int]] = {}
        self._in: dict[int, dict[int, int]] = {}
        self._edge_count = 0
        self._total_weight = 0
        self._frozen = False
        # Filled by ingest; records whose owner and owned city coincide.
        self.dropped_self_loops = 0

    # -- construction -----------------------------------------------------

    def _require_mutable(self):
        if self._frozen:
            raise SnapshotStateError(f"snapshot {self.label!r} is frozen")

    def add_node(self, label: str) -> int:
        """Register ``label`` and make it a member of this snapshot."""
        self._require_mutable()
        node = self.registry.register(label)
        self._nodes.add(node)
        return node

    def include(self, node: int) -> int:
        """Make an already registered id a member of this snapshot."""
        self._require_mutable()
        self._nodes.add(self.registry.check(node))
        return node

    def upsert_edge(self, src: int, dst: int, delta: int = 1) -> "Snapshot":
        """Add ``delta`` ties to the edge ``src -> dst``, creating it if absent."""
        self._require_mutable()
        self.registry.check(src)
        self.registry.check(dst)
        if src == dst:
            label = self.registry.label_of(src)
            raise SelfLoopError(f"self-loop on {label!r} rejected")
        if isinstance(delta, bool) or not isinstance(delta, int) or delta < 1:
            raise ValidationError(f"edge weight increment must be a positive integer, got {delta!r}")
        self._insert(src, dst, delta)
        return self

    def _insert(self, src: int, dst: int, delta: int):
        # Caller has validated ids, src != dst and delta >= 1.
        row = self._out.setdefault(src, {})
        if dst not in row:
            self._edge_count += 1
            row[dst] = 0
            self._in.setdefault(dst, {})[src] = 0
        row[dst] += delta
        self._in[dst][src] += delta
        self._total_weight += delta
        self._nodes.add(src)
        self._nodes.add(dst)

    def freeze(self) -> "Snapshot":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def require_frozen(self):
        if not self._frozen:
            raise SnapshotStateError(
                f"snapshot {self.label!r} must be frozen before computing metrics"
            )

    # -- queries ----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def total_weight(self) -> int:
        return self._total_weight

    def nodes(self) -> list[int]:
        """Member node ids in ascending order."""
        return sorted(self._nodes)

    def has_node(self, node: int) -> bool:
        return node in self._nodes

    def weight(self, src: int, dst: int) -> int:
        """Weight of ``src -> dst``; 0 when the edge is absent."""
        return self._out.get(src, {}).get(dst, 0)

    def out_row(self, node: int) -> dict[int, int]:
        """Read-only view of out-neighbours; callers must not mutate it."""
        return self._out.get(node, _EMPTY)

    def in_row(self, node: int) -> dict[int, int]:
        return self._in.get(node, _EMPTY)

    def out_weights(self, node: int) -> list[tuple[int, int]]:
        self.registry.check(node)
        return sorted(self._out.get(node, _EMPTY).items())

    def in_weights(self, node: int) -> list[tuple[int, int]]:
        self.registry.check(node)
        return sorted(self._in.get(node, _EMPTY).items())

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """All ``(src, dst, weight)`` triples ordered by (src, dst) id."""
        for src in sorted(self._out):
            row = self._out[src]
            for dst in sorted(row):
                yield src, dst, row[dst]

    def labelled_edges(self) -> dict[tuple[str, str], int]:
        label = self.registry.label_of
        return {(label(s), label(d)): w for s, d, w in self.edges()}

    def node_labels(self) -> set[str]:
        return {self.registry.label_of(n) for n in self._nodes}

    def __eq__(self, other):
        # Compared by labels so snapshots on different registries can match.
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (
            self.label == other.label
            and self.node_labels() == other.node_labels()
            and self.labelled_edges() == other.labelled_edges()
        )

    __hash__ = None

    def __repr__(self):
        state = "frozen" if self._frozen else "open"
        return (
            f"Snapshot({self.label!r}, nodes={self.node_count}, "
            f"edges={self.edge_count}, {state})"
        )


_EMPTY: dict[int, int] = {}


def upsert_edge(snapshot: Snapshot, src: int, dst: int, delta: int = 1) -> Snapshot:
    return snapshot.upsert_edge(src, dst, delta)


def out_weights(snapshot: Snapshot, node: int) -> list[tuple[int, int]]:
    return snapshot.out_weights(node)


def in_weights(snapshot: Snapshot, node: int) -> list[tuple[int, int]]:
    return snapshot.in_weights(node)


# -- edge-list files -------------------------------------------------------


def _row_writer(stream: TextIO):
    plain = csv.writer(stream, lineterminator="\n")
    quoted = csv.writer(stream, lineterminator="\n", quoting=csv.QUOTE_ALL)

    def write(row):
        # An unquoted leading '#' would read back as a comment.
        (quoted if str(row[0]).startswith("#") else plain).writerow(row)

    return write


def write_edgelist(snapshot: Snapshot, stream: TextIO) -> None:
    """Write ``snapshot`` as an edge list, edges sorted by (src, dst) label."""
    label = snapshot.registry.label_of
    stream.write(f"{_SNAPSHOT_DIRECTIVE} {snapshot.label}\n")
    connected = set(snapshot._out) | set(snapshot._in)
    for name in sorted(label(n) for n in snapshot._nodes if n not in connected):
        stream.write(f"{_ISOLATED_DIRECTIVE} {name}\n")
    write = _row_writer(stream)
    write(EDGELIST_HEADER)
    rows = sorted((label(s), label(d), w) for s, d, w in snapshot.edges())
    for row in rows:
        write(row)


def read_edgelist(
    stream: TextIO,
    registry: NodeRegistry | None = None,
    label: str | None = None,
) -> Snapshot:
    """Parse an edge list into a frozen snapshot.

    ``label`` overrides any ``# snapshot:`` directive.  Duplicate
    ``(src, dst)`` rows, self-loops and non-positive weights are rejected
    with :class:`FormatError`.
    """
    directive_label = None
    isolated: list[str] = []
    data_lines: list[tuple[int, str]] = []
    for lineno, line in enumerate(stream, start=1):
        if line.startswith("#"):
            if line.startswith(_SNAPSHOT_DIRECTIVE):
                directive_label = line[len(_SNAPSHOT_DIRECTIVE):].strip()
            elif line.startswith(_ISOLATED_DIRECTIVE):
                isolated.append(line[len(_ISOLATED_DIRECTIVE):].strip())
            continue
        if not line.strip():
            continue
        data_lines.append((lineno, line))

    if not data_lines:
        raise FormatError("edge list has no header line 'src,dst,weight'")
    rows = csv.reader(io.StringIO("".join(line for _, line in data_lines)))
    header = [h.strip() for h in next(rows)]
    if tuple(header) != EDGELIST_HEADER:
        raise FormatError(
            f"line {data_lines[0][0]}: expected header 'src,dst,weight', got {','.join(header)!r}"
        )

    snap = Snapshot(label or directive_label or "snapshot", registry)
    seen: set[tuple[int, int]] = set()
    ids: dict[str, int] = {}
    for (lineno, _), row in zip(data_lines[1:], rows):
        if len(row) != 3:
            raise FormatError(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            src = ids.get(row[0])
            if src is None:
                src = ids[row[0]] = snap.add_node(row[0])
            dst = ids.get(row[1])
            if dst is None:
                dst = ids[row[1]] = snap.add_node(row[1])
        except ValidationError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        try:
            weight = int(row[2])
        except ValueError:
            raise FormatError(f"line {lineno}: weight {row[2]!r} is not an integer") from None
        if weight < 1:
            raise FormatError(f"line {lineno}: weight must be positive, got {weight}")
        if src == dst:
            raise FormatError(f"line {lineno}: self-loop on {row[0].strip()!r}")
        if (src, dst) in seen:
            raise FormatError(f"line {lineno}: duplicate edge {row[0].strip()!r} -> {row[1].strip()!r}")
        seen.add((src, dst))
        snap._insert(src, dst, weight)
    for name in isolated:
        try:
            snap.add_node(name)
        except ValidationError as exc:
            raise FormatError(f"isolated-node directive: {exc}") from None
    return snap.freeze()


def save_edgelist(snapshot: Snapshot, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_edgelist(snapshot, fh)


def load_edgelist(
    path: str | os.PathLike,
    registry: NodeRegistry | None = None,
    label: str | None = None,
) -> Snapshot:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return read_edgelist(fh, registry=registry, label=label)
