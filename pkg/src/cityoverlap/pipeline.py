"""Stable and changing cities between two snapshots.

The procedure has three steps:

1. Shortlist the ``k`` nodes with the highest weighted total degree, among
   nodes whose overlap is defined (links in both snapshots).
2. Compute topological overlap for the shortlisted nodes.
3. Order by overlap: the top ``n`` are stable, the bottom ``n`` are
   changing.  A joint table sets each node's overlap rank next to its rank
   by absolute change in weighted degree.

All ties are broken by node label so reports are reproducible.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .graph import Snapshot
from .metrics import (
    Direction,
    Mode,
    _check_pair,
    _coerce,
    degree_centrality,
    topological_overlap_all,
)

log = logging.getLogger(__name__)

DEFAULT_SHORTLIST = 250
DEFAULT_TOP = 25
REPORT_CSV_HEADER = ("rank", "city", "overlap", "dc_rank", "dc_delta")


class DcSource(str, Enum):
    EARLIER = "earlier"
    LATER = "later"
    MAX = "max"


def _strengths(s1: Snapshot, s2: Snapshot, source: DcSource) -> dict[int, int]:
    if source is DcSource.EARLIER:
        return degree_centrality(s1, "weighted", "total")
    if source is DcSource.LATER:
        return degree_centrality(s2, "weighted", "total")
    first = degree_centrality(s1, "weighted", "total")
    second = degree_centrality(s2, "weighted", "total")
    return {node: max(first[node], second[node]) for node in first}


def _positive_int(name, value):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return value


def shortlist(s1: Snapshot, s2: Snapshot, k: int = DEFAULT_SHORTLIST, dc_source="earlier", direction="out") -> list[int]:
    """Top-``k`` eligible nodes by weighted total degree, label-ordered on ties.

    A node is eligible when its overlap in ``direction`` is defined, i.e. it
    has links in that direction in both snapshots.
    """
    _check_pair(s1, s2)
    _positive_int("k", k)
    source = _coerce(DcSource, dc_source)
    direction = _coerce(Direction, direction)
    # Positivity of the overlap sums does not depend on the mode.
    scores = topological_overlap_all(s1, s2, Mode.BINARY, direction)
    strength = _strengths(s1, s2, source)
    label = s1.registry.label_of
    eligible = [node for node, score in scores.items() if score.defined]
    eligible.sort(key=lambda node: (-strength[node], label(node)))
    return eligible[:k]


def dc_change_ranking(s1: Snapshot, s2: Snapshot) -> list[tuple[int, int]]:
    """All registered nodes with signed strength change, largest ``|delta|`` first."""
    _check_pair(s1, s2)
    before = degree_centrality(s1, "weighted", "total")
    after = degree_centrality(s2, "weighted", "total")
    label = s1.registry.label_of
    deltas = [(node, after[node] - before[node]) for node in s1.registry]
    deltas.sort(key=lambda item: (-abs(item[1]), label(item[0])))
    return deltas


@dataclass(frozen=True)
class RankedNode:
    node: int
    city: str
    overlap: float
    to_rank: int
    dc_rank: int
    dc_delta: int


@dataclass(frozen=True)
class RankingReport:
    shortlist: list[int]
    # Ascending overlap, i.e. ordered by to_rank.
    joint: list[RankedNode]
    stable: list[RankedNode]
    changing: list[RankedNode]
    parameters: dict

    def by_dc_rank(self) -> list[RankedNode]:
        return sorted(self.joint, key=lambda row: row.dc_rank)


def rank_stability(
    s1: Snapshot,
    s2: Snapshot,
    k: int = DEFAULT_SHORTLIST,
    n: int = DEFAULT_TOP,
    mode="weighted",
    direction="out",
    dc_source="earlier",
) -> RankingReport:
    """Shortlist, score and order nodes into stable and changing lists."""
    _positive_int("k", k)
    _positive_int("n", n)
    mode = _coerce(Mode, mode)
    direction = _coerce(Direction, direction)
    source = _coerce(DcSource, dc_source)

    picked = shortlist(s1, s2, k, source, direction)
    if n > len(picked):
        log.warning("top n=%d exceeds shortlist size %d; clamping", n, len(picked))
    n_eff = min(n, len(picked))

    scores = topological_overlap_all(s1, s2, mode, direction)
    label = s1.registry.label_of

    in_list = set(picked)
    dc_order = [(node, delta) for node, delta in dc_change_ranking(s1, s2) if node in in_list]
    dc_rank = {node: i for i, (node, _) in enumerate(dc_order, start=1)}
    dc_delta = dict(dc_order)

    ascending = sorted(picked, key=lambda node: (scores[node].value, label(node)))
    joint = [
        RankedNode(node, label(node), scores[node].value, i, dc_rank[node], dc_delta[node])
        for i, node in enumerate(ascending, start=1)
    ]
    descending = sorted(joint, key=lambda row: (-row.overlap, row.city))

    parameters = {
        "k": k,
        "n": n_eff,
        "mode": mode.value,
        "direction": direction.value,
        "dc_source": source.value,
    }
    return RankingReport(
        shortlist=picked,
        joint=joint,
        stable=descending[:n_eff],
        changing=joint[:n_eff],
        parameters=parameters,
    )


def joint_comparison(s1, s2, k=DEFAULT_SHORTLIST, mode="weighted", direction="out", dc_source="earlier"):
    """``(node, to_rank, dc_rank)`` for every shortlisted node, by to_rank."""
    report = rank_stability(s1, s2, k, 1, mode, direction, dc_source)
    return [(row.node, row.to_rank, row.dc_rank) for row in report.joint]


# -- rendering -------------------------------------------------------------


def _table(title, header, rows):
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    aligns = ["<" if h in ("City", "city") else ">" for h in header]

    def fmt(cells):
        return "  ".join(f"{c:{a}{w}}" for c, a, w in zip(cells, aligns, widths)).rstrip()

    lines = [title, fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


def format_text(report: RankingReport) -> str:
    """Aligned tables; overlap values rounded to 3 decimals."""
    p = report.parameters
    head = ["Rank", "City", "Overlap", "DC-Rank", "DC-Delta"]

    def cells(rank, row):
        return [str(rank), row.city, f"{row.overlap:.3f}", str(row.dc_rank), str(row.dc_delta)]

    stable = [cells(i, row) for i, row in enumerate(report.stable, start=1)]
    changing = [cells(row.to_rank, row) for row in report.changing]
    n = p["n"]
    by_to = [[row.city, str(row.to_rank), str(row.dc_rank)] for row in report.joint[:n]]
    by_dc = [[row.city, str(row.to_rank), str(row.dc_rank)] for row in report.by_dc_rank()[:n]]

    settings = (
        f"# mode={p['mode']} direction={p['direction']} k={p['k']} n={p['n']} "
        f"dc_source={p['dc_source']} shortlisted={len(report.shortlist)}"
    )
    return "\n\n".join([
        settings,
        _table(f"Top {len(stable)} stable cities (descending overlap)", head, stable),
        _table(f"Top {len(changing)} changing cities (ascending overlap)", head, changing),
        _table(f"Top {len(by_to)} changing cities by TO-Rank", ["City", "TO-Rank", "DC-Rank"], by_to),
        _table(f"Top {len(by_dc)} cities by change in weighted degree (DC-Rank)",
               ["City", "TO-Rank", "DC-Rank"], by_dc),
    ]) + "\n"


def _csv_section(name, rows, ranks):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    buf.write(f"# {name}\n")
    writer.writerow(REPORT_CSV_HEADER)
    for rank, row in zip(ranks, rows):
        writer.writerow([rank, row.city, repr(row.overlap), row.dc_rank, row.dc_delta])
    return buf.getvalue()


def format_csv(report: RankingReport) -> str:
    """Three comment-delimited CSV sections at full precision.

    ``stable`` and ``changing`` rank within their list; ``joint`` covers the
    whole shortlist and ranks by to_rank.
    """
    return "\n".join([
        _csv_section("stable", report.stable, range(1, len(report.stable) + 1)),
        _csv_section("changing", report.changing, [row.to_rank for row in report.changing]),
        _csv_section("joint", report.joint, [row.to_rank for row in report.joint]),
    ])
