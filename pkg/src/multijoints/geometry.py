"""Points, canonical lines and line-family instances in F^d.

A point is a plain tuple of :class:`~multijoints.field.Scalar`.  Lines are
stored in a canonical form so that two parametrisations of the same point
set compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Iterable, Sequence, Tuple

from .field import Field, Scalar, rank, row_reduce

Point = Tuple[Scalar, ...]

DEFAULT_TUPLE_CAP = 10**6


class InstanceError(ValueError):
    pass


class TupleCapExceeded(RuntimeError):
    pass


def make_point(fld: Field, coords: Iterable) -> Point:
    return tuple(c if isinstance(c, Scalar) else fld(c) for c in coords)


def point_key(x: Point):
    return tuple(c.sort_key() for c in x)


def format_point(x: Point) -> str:
    return ",".join(str(c) for c in x)


@dataclass(frozen=True)
class Line:
    """A line ``base + t * direction`` belonging to colour family ``family``.

    On construction the direction is scaled so its first nonzero coordinate
    (the pivot) is 1, and the base is slid along the line until its pivot
    coordinate is 0.  Equality and hashing ignore ``family``.
    """

    base: Point
    direction: Point
    family: int = dc_field(default=0, compare=False)

    def __post_init__(self):
        if len(self.base) != len(self.direction):
            raise InstanceError("base and direction have different lengths")
        k = next((i for i, c in enumerate(self.direction) if c), None)
        if k is None:
            raise InstanceError("line direction must be nonzero")
        scale = self.direction[k].inverse()
        direction = tuple(c * scale for c in self.direction)
        t = self.base[k]
        base = tuple(b - t * w for b, w in zip(self.base, direction))
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "base", base)

    @property
    def pivot(self) -> int:
        return next(i for i, c in enumerate(self.direction) if c)

    @property
    def dimension(self) -> int:
        return len(self.base)

    def at(self, t) -> Point:
        return tuple(b + t * w for b, w in zip(self.base, self.direction))

    def __str__(self):
        return f"family {self.family} ; base {format_point(self.base)} ; dir {format_point(self.direction)}"


def _check_compatible(l: Line, x: Point):
    if len(x) != l.dimension:
        raise InstanceError(f"dimension mismatch: line in F^{l.dimension}, point {format_point(x)}")
    if x and x[0].field != l.base[0].field:
        raise InstanceError("field mismatch between line and point")


def contains(l: Line, x: Point) -> bool:
    _check_compatible(l, x)
    t = x[l.pivot]
    return all(xi == b + t * w for xi, b, w in zip(x, l.base, l.direction))


def intersect(l1: Line, l2: Line) -> Point | None:
    """The common point of two distinct lines, or ``None``."""
    if l1 == l2:
        raise ValueError("intersect() needs two distinct lines")
    if l1.dimension != l2.dimension:
        raise InstanceError("lines live in different dimensions")
    if l1.direction == l2.direction:
        return None
    # s * d1 - t * d2 = b2 - b1
    rows = [[w1, -w2, b2 - b1] for w1, w2, b1, b2 in zip(l1.direction, l2.direction, l1.base, l2.base)]
    rref, pivots = row_reduce(rows)
    if 2 in pivots:
        return None
    return l1.at(rref[0][2])


def directions_span(lines: Sequence[Line]) -> bool:
    if not lines:
        raise ValueError("directions_span() needs d lines, got none")
    d = lines[0].dimension
    if len(lines) != d:
        raise ValueError(f"directions_span() needs exactly {d} lines, got {len(lines)}")
    return rank([l.direction for l in lines]) == d


@dataclass(frozen=True)
class Instance:
    """Colour families L_1..L_d of lines in F^d, plus an optional point set J.

    ``families[j - 1]`` holds the lines of colour ``j``.  Validation rejects
    duplicate lines and lines shared between families; an explicit point
    list must consist of multijoints.
    """

    field: Field
    dimension: int
    families: Tuple[Tuple[Line, ...], ...]
    points: Tuple[Point, ...] | None = None
    _through: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        d = self.dimension
        if d < 2:
            raise InstanceError(f"dimension must be at least 2, got {d}")
        families = tuple(tuple(f) for f in self.families)
        object.__setattr__(self, "families", families)
        if len(families) != d:
            raise InstanceError(f"expected {d} line families, got {len(families)}")
        owner: dict[Line, int] = {}
        for j, fam in enumerate(families, start=1):
            for l in fam:
                if l.dimension != d:
                    raise InstanceError(f"line {l} is not in F^{d}")
                if l.base[0].field != self.field:
                    raise InstanceError(f"line {l} is not over {self.field}")
                if l.family != j:
                    raise InstanceError(f"line {l} listed in family {j}")
                if l in owner:
                    if owner[l] == j:
                        raise InstanceError(f"duplicate line in family {j}: {l}")
                    raise InstanceError(f"families {owner[l]} and {j} share the line {l}")
                owner[l] = j
        if self.points is not None:
            pts = tuple(self.points)
            object.__setattr__(self, "points", pts)
            if len(set(pts)) != len(pts):
                raise InstanceError("explicit point list contains duplicates")
            for x in pts:
                if len(x) != d:
                    raise InstanceError(f"point {format_point(x)} is not in F^{d}")
                if not is_multijoint(x, self):
                    raise InstanceError(f"point {format_point(x)} is not a multijoint")

    @property
    def lines(self) -> list[Line]:
        return [l for fam in self.families for l in fam]

    def lines_through(self, x: Point) -> Tuple[Tuple[Line, ...], ...]:
        """Per family, the lines passing through ``x`` (cached)."""
        hit = self._through.get(x)
        if hit is None:
            hit = tuple(tuple(l for l in fam if contains(l, x)) for fam in self.families)
            self._through[x] = hit
        return hit

    def point_set(self) -> list[Point]:
        """The explicit J if one was given, else every multijoint."""
        if self.points is not None:
            return list(self.points)
        return multijoints(self)


def _spanning_tuple(incident: Sequence[Sequence[Line]]):
    for combo in product(*incident):
        if directions_span(combo):
            return combo
    return None


def candidate_points(inst: Instance) -> list[Point]:
    """Intersections of family-1 lines with family-2 lines, sorted."""
    found = set()
    for l1 in inst.families[0]:
        for l2 in inst.families[1]:
            x = intersect(l1, l2)
            if x is not None:
                found.add(x)
    return sorted(found, key=point_key)


def is_multijoint(x: Point, inst: Instance) -> bool:
    incident = inst.lines_through(x)
    if not all(incident):
        return False
    return _spanning_tuple(incident) is not None


def multijoints(inst: Instance) -> list[Point]:
    """All multijoints of the instance, sorted by coordinates."""
    return [x for x in candidate_points(inst) if is_multijoint(x, inst)]


def genericity_violation(inst: Instance, tuple_cap: int = DEFAULT_TUPLE_CAP):
    """Return ``(x, lines)`` for a non-spanning incident tuple, else ``None``.

    Raises :class:`TupleCapExceeded` if some point has more than
    ``tuple_cap`` incident tuples to examine.
    """
    for x in candidate_points(inst):
        incident = inst.lines_through(x)
        if not all(incident):
            continue
        total = 1
        for ls in incident:
            total *= len(ls)
        if total > tuple_cap:
            raise TupleCapExceeded(f"{total} incident tuples at {format_point(x)} exceeds cap {tuple_cap}")
        for combo in product(*incident):
            if not directions_span(combo):
                return x, combo
    return None


def is_generic(inst: Instance, tuple_cap: int = DEFAULT_TUPLE_CAP) -> bool:
    return genericity_violation(inst, tuple_cap) is None
