"""Closed integer intervals and axis-aligned boxes.

A rule condition constrains each packet attribute to a closed integer
range; a box is one such range per attribute, i.e. a hyperrectangle in
packet space.  Everything in this module is an immutable value and every
operation is a pure function, so concurrent use needs no locking.

The empty set is always represented by absence (``None`` for intervals,
an empty list for boxes), never by an inverted interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArityError, DomainError


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed integer interval [lo, hi], inclusive at both ends."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo},{self.hi}]")

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __repr__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True, slots=True)
class Box:
    """One interval per attribute: a single conjunctive condition term."""

    intervals: tuple[Interval, ...]

    @classmethod
    def from_pairs(cls, *pairs: tuple[int, int]) -> Box:
        return cls(tuple(Interval(lo, hi) for lo, hi in pairs))

    @property
    def p(self) -> int:
        return len(self.intervals)

    def contains(self, packet: tuple[int, ...]) -> bool:
        if len(packet) != len(self.intervals):
            raise ArityError(
                f"packet has {len(packet)} values, box has {len(self.intervals)} attributes"
            )
        return all(iv.contains(v) for iv, v in zip(self.intervals, packet))

    def __repr__(self) -> str:
        return "(" + " ".join(repr(iv) for iv in self.intervals) + ")"


@dataclass(frozen=True, slots=True)
class AttributeDomain:
    """Name and inclusive bounds of one packet attribute."""

    name: str
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"attribute {self.name}: lo {self.lo} > hi {self.hi}")


@dataclass(frozen=True, slots=True)
class DomainSpec:
    """Ordered attribute bounds shared by all rules of a ruleset."""

    attributes: tuple[AttributeDomain, ...]

    def __post_init__(self):
        if not self.attributes:
            raise ValueError("a domain needs at least one attribute")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate attribute names in {names}")

    @classmethod
    def of(cls, *attrs: tuple[str, int, int]) -> DomainSpec:
        return cls(tuple(AttributeDomain(*a) for a in attrs))

    @classmethod
    def five_tuple(cls) -> DomainSpec:
        """The standard IPv4 filtering domain: protocol, addresses, ports."""
        return cls.of(
            ("protocol", 0, 255),
            ("source", 0, 2**32 - 1),
            ("sport", 0, 65535),
            ("destination", 0, 2**32 - 1),
            ("dport", 0, 65535),
        )

    @property
    def p(self) -> int:
        return len(self.attributes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def full_interval(self, k: int) -> Interval:
        a = self.attributes[k]
        return Interval(a.lo, a.hi)

    def full_box(self) -> Box:
        return Box(tuple(self.full_interval(k) for k in range(self.p)))

    def size(self) -> int:
        """Total number of distinct packets in the domain."""
        return math.prod(a.hi - a.lo + 1 for a in self.attributes)

    def check_box(self, box: Box) -> None:
        if box.p != self.p:
            raise ArityError(f"box has {box.p} attributes, domain has {self.p}")
        for attr, iv in zip(self.attributes, box.intervals):
            if iv.lo < attr.lo or iv.hi > attr.hi:
                raise DomainError(f"{iv} outside attribute {attr.name} [{attr.lo},{attr.hi}]")

    def check_packet(self, packet: tuple[int, ...]) -> None:
        if len(packet) != self.p:
            raise ArityError(f"packet has {len(packet)} values, domain has {self.p}")
        for attr, v in zip(self.attributes, packet):
            if v < attr.lo or v > attr.hi:
                raise DomainError(f"value {v} outside attribute {attr.name} [{attr.lo},{attr.hi}]")


def interval_intersect(a: Interval, b: Interval) -> Interval | None:
    """Intersection of two intervals, or None when they do not overlap."""
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    return Interval(lo, hi) if lo <= hi else None


def interval_subtract(b: Interval, a: Interval) -> list[Interval]:
    """Points of b not in a, as up to two disjoint intervals in ascending order."""
    if not b.overlaps(a):
        return [b]
    pieces = []
    if b.lo < a.lo:
        pieces.append(Interval(b.lo, a.lo - 1))
    if b.hi > a.hi:
        pieces.append(Interval(a.hi + 1, b.hi))
    return pieces


def box_intersects(a: Box, b: Box) -> bool:
    """True iff the boxes share at least one packet (overlap on every attribute)."""
    if a.p != b.p:
        raise ArityError(f"boxes have {a.p} and {b.p} attributes")
    return all(x.overlaps(y) for x, y in zip(a.intervals, b.intervals))


def box_subtract(b: Box, a: Box) -> list[Box]:
    """Decompose b minus a into disjoint boxes.

    Uses slab decomposition: slab k keeps attributes before k on the
    intersection, attribute k on the residual difference, and attributes
    after k on b's original ranges.  A residual with two pieces yields two
    boxes, lower piece first; empty slabs are dropped.  Slabs are emitted
    in ascending attribute order, so identical inputs always give the
    identical, identically-ordered result.

    Returns [b] unchanged when the boxes are disjoint, and [] when a
    covers b entirely.  The result has at most 2p boxes.
    """
    if not box_intersects(b, a):
        return [b]
    out: list[Box] = []
    prefix: list[Interval] = []
    for k in range(b.p):
        b_k = b.intervals[k]
        a_k = a.intervals[k]
        suffix = b.intervals[k + 1 :]
        for piece in interval_subtract(b_k, a_k):
            out.append(Box(tuple(prefix) + (piece,) + suffix))
        common = interval_intersect(b_k, a_k)
        if common is None:  # unreachable after the intersects guard
            break
        prefix.append(common)
    return out


def bounding_box(boxes: tuple[Box, ...] | list[Box]) -> Box | None:
    """Tightest single box containing every given box; None for no boxes."""
    if not boxes:
        return None
    p = boxes[0].p
    los = [min(b.intervals[k].lo for b in boxes) for k in range(p)]
    his = [max(b.intervals[k].hi for b in boxes) for k in range(p)]
    return Box(tuple(Interval(lo, hi) for lo, hi in zip(los, his)))


def boxes_pairwise_disjoint(boxes: list[Box] | tuple[Box, ...]) -> bool:
    """True iff no two boxes in the sequence share a packet."""
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if box_intersects(boxes[i], boxes[j]):
                return False
    return True
