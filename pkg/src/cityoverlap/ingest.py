"""Firm-ownership records to city networks.

Each ownership record is one financial tie: an owner firm holding a share in
an owned firm.  Every record contributes one unit of weight to the directed
edge ``owner_city -> owned_city``.  Records whose two firms sit in the same
city are dropped from the edge set but counted, and their city is still
registered so node counts reflect every city present in the data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import FormatError, ValidationError
from .graph import NodeRegistry, Snapshot, normalize_label

OWNERSHIP_HEADER = ("group_id", "owner_firm_id", "owned_firm_id", "owner_city", "owned_city")


@dataclass(frozen=True)
class OwnershipRecord:
    group_id: str
    owner_firm_id: str
    owned_firm_id: str
    owner_city: str
    owned_city: str

    def __post_init__(self):
        for name in OWNERSHIP_HEADER:
            value = getattr(self, name)
            if not isinstance(value, str) or not value.strip():
                raise ValidationError(f"field {name!r} is empty")
            object.__setattr__(self, name, value.strip())
        if self.owner_firm_id == self.owned_firm_id:
            raise ValidationError(f"firm {self.owner_firm_id!r} cannot own itself")


@dataclass
class RowError:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


@dataclass
class ParseResult:
    records: list[OwnershipRecord] = field(default_factory=list)
    errors: list[RowError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        return f"{len(self.records)} records parsed, {len(self.errors)} rows rejected"


def parse_ownership_file(stream: TextIO) -> ParseResult:
    """Read ownership rows, collecting per-row errors instead of stopping.

    A missing or wrong header raises :class:`FormatError`; blank lines are
    skipped.
    """
    reader = csv.reader(stream)
    header = None
    for row in reader:
        if any(cell.strip() for cell in row):
            header = tuple(cell.strip() for cell in row)
            break
    if header is None:
        raise FormatError("ownership file is empty: missing header " + ",".join(OWNERSHIP_HEADER))
    if header != OWNERSHIP_HEADER:
        raise FormatError(
            f"line {reader.line_num}: expected header {','.join(OWNERSHIP_HEADER)!r}, "
            f"got {','.join(header)!r}"
        )

    result = ParseResult()
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(OWNERSHIP_HEADER):
            result.errors.append(
                RowError(reader.line_num, f"expected {len(OWNERSHIP_HEADER)} fields, got {len(row)}")
            )
            continue
        try:
            result.records.append(OwnershipRecord(*row))
        except ValidationError as exc:
            result.errors.append(RowError(reader.line_num, str(exc)))
    return result


def aggregate_city_graph(
    records: Iterable[OwnershipRecord],
    label: str,
    registry: NodeRegistry | None = None,
) -> Snapshot:
    """Pool all groups' ties into one frozen city snapshot.

    New cities are registered in sorted label order, which makes the result
    independent of record order.  ``snapshot.dropped_self_loops`` holds the
    number of intra-city records removed.
    """
    records = list(records)
    snap = Snapshot(label, registry)
    cities = set()
    for rec in records:
        cities.add(normalize_label(rec.owner_city))
        cities.add(normalize_label(rec.owned_city))
    ids = {city: snap.add_node(city) for city in sorted(cities)}

    pair_counts: dict[tuple[int, int], int] = {}
    dropped = 0
    for rec in records:
        src = ids[rec.owner_city.strip()]
        dst = ids[rec.owned_city.strip()]
        if src == dst:
            dropped += 1
            continue
        pair_counts[(src, dst)] = pair_counts.get((src, dst), 0) + 1
    for (src, dst), count in sorted(pair_counts.items()):
        snap.upsert_edge(src, dst, count)
    snap.dropped_self_loops = dropped
    return snap.freeze()
