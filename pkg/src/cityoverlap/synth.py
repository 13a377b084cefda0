"""Seeded snapshot pairs with controlled link retention.

The random stream is fixed so that a seed gives the same pair in any
implementation:

* Generator: SplitMix64.  ``state += 0x9E3779B97F4A7C15``, then
  ``z = (z ^ z>>30) * 0xBF58476D1CE4E5B9``, ``z = (z ^ z>>27) *
  0x94D049BB133111EB``, output ``z ^ z>>31`` (all mod 2**64).  The initial
  state is the seed.
* ``below(n)``: draw ``x``; reject while ``x >= 2**64 - (2**64 % n)``;
  return ``x % n``.
* ``unit()``: ``(x >> 11) * 2**-53``, uniform on [0, 1).

Ordered non-diagonal pairs are indexed ``0 .. N(N-1)-1``: index ``q`` is
source ``q // (N-1)`` and target ``r = q % (N-1)``, shifted to ``r + 1`` when
``r >= source``.

Generation order:

1. Floyd's algorithm picks ``edge_count`` distinct indices: for
   ``j = M-m .. M-1`` draw ``t = below(j+1)`` and add ``j`` if ``t`` is
   already chosen, else ``t``.  Indices are then sorted ascending.
2. One ``1 + below(max_weight)`` weight per edge, in sorted order.
3. One ``unit() < retain_probability`` draw per edge, in sorted order; kept
   edges carry their weight into the second snapshot.
4. Floyd's algorithm over the complement (indices not in step 1, ranked in
   ascending order) picks ``new_edge_count`` fresh edges; sorted, then each
   gets ``1 + below(max_weight)``.

Node labels are ``n`` followed by the zero-padded index, so label order and
index order agree.  Every node belongs to both snapshots.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .errors import ValidationError
from .graph import NodeRegistry, Snapshot

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def unit(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class SynthConfig:
    node_count: int
    edge_count: int
    retain_probability: float
    new_edge_count: int = 0
    max_weight: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("node_count", "edge_count", "max_weight"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if isinstance(self.new_edge_count, bool) or not isinstance(self.new_edge_count, int) \
                or self.new_edge_count < 0:
            raise ValidationError(f"new_edge_count must be a non-negative integer, got {self.new_edge_count!r}")
        if not 0.0 <= self.retain_probability <= 1.0:
            raise ValidationError(f"retain_probability must lie in [0, 1], got {self.retain_probability!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        slots = self.pair_slots
        if self.edge_count > slots:
            raise ValidationError(
                f"edge_count {self.edge_count} exceeds the {slots} ordered pairs of {self.node_count} nodes"
            )
        if self.edge_count + self.new_edge_count > slots:
            raise ValidationError(
                f"cannot add {self.new_edge_count} new edges: only {slots - self.edge_count} pairs are unused"
            )

    @property
    def pair_slots(self) -> int:
        return self.node_count * (self.node_count - 1)


def _floyd_sample(rng: SplitMix64, population: int, count: int) -> list[int]:
    chosen: set[int] = set()
    for j in range(population - count, population):
        t = rng.below(j + 1)
        chosen.add(j if t in chosen else t)
    return sorted(chosen)


def _complement_index(taken: list[int], rank: int) -> int:
    """The ``rank``-th (0-based) integer not in sorted list ``taken``."""
    lo, hi = rank, rank + len(taken)
    # Smallest x with (x + 1 - #taken<=x) > rank.
    while lo < hi:
        mid = (lo + hi) // 2
        if mid + 1 - bisect.bisect_right(taken, mid) > rank:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _pair(index: int, n: int) -> tuple[int, int]:
    src, r = divmod(index, n - 1)
    return src, (r + 1 if r >= src else r)


def generate_pair(config: SynthConfig) -> tuple[Snapshot, Snapshot]:
    """Earlier and later frozen snapshots on a shared registry."""
    rng = SplitMix64(config.seed)
    n = config.node_count
    width = len(str(n - 1))
    registry = NodeRegistry(f"n{i:0{width}d}" for i in range(n))
    first = Snapshot("t0", registry)
    second = Snapshot("t1", registry)
    for node in registry:
        first.include(node)
        second.include(node)

    slots = config.pair_slots
    picked = _floyd_sample(rng, slots, config.edge_count)
    weights = [1 + rng.below(config.max_weight) for _ in picked]
    keep = [rng.unit() < config.retain_probability for _ in picked]
    for index, weight, kept in zip(picked, weights, keep):
        src, dst = _pair(index, n)
        first.upsert_edge(src, dst, weight)
        if kept:
            second.upsert_edge(src, dst, weight)

    fresh = [
        _complement_index(picked, rank)
        for rank in _floyd_sample(rng, slots - len(picked), config.new_edge_count)
    ]
    for index in fresh:
        src, dst = _pair(index, n)
        second.upsert_edge(src, dst, 1 + rng.below(config.max_weight))
    return first.freeze(), second.freeze()
