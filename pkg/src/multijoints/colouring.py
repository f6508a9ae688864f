"""Unsaturated d-colourings of multijoint sets by tree-guided recolouring.

A colouring kappa of a point set J_c is *(m+1)-unsaturated* when no line of
family j carries more than m points of colour j.  Points are added one at a
time.  Before each insertion we grow a rooted tree from the new point x_0;
the tree either shows that x_0 can be coloured straight away, points at a
single recolouring that strictly advances kappa in a well-founded order, or
runs to completion, in which case its vertices and lines form a
:class:`Certificate` that m was too small.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .geometry import Instance, Line, Point, format_point, genericity_violation, is_multijoint, contains

log = logging.getLogger(__name__)


class ColouringError(ValueError):
    pass


class NonGenericError(ColouringError):
    def __init__(self, witness):
        x, lines = witness
        self.witness = witness
        super().__init__(
            f"instance is not generic: lines {[str(l) for l in lines]} meet at {format_point(x)} without spanning"
        )


class IterationCapExceeded(RuntimeError):
    """More recolourings than the theory allows; always a bug."""


class Colouring(Mapping):
    """An immutable assignment of colours ``1..d`` to points.

    Iteration order is the fixed labelling of the points (insertion order),
    which the tree construction uses to order siblings.
    """

    def __init__(self, assignment: Mapping[Point, int] | Iterable[tuple[Point, int]] = (), d: int = 2):
        self.d = d
        self._colour = dict(assignment)
        for x, c in self._colour.items():
            if not (isinstance(c, int) and 1 <= c <= d):
                raise ColouringError(f"colour {c!r} of {format_point(x)} is outside 1..{d}")
        self._rank = None

    def __getitem__(self, x: Point) -> int:
        return self._colour[x]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._colour)

    def __len__(self):
        return len(self._colour)

    def __eq__(self, other):
        if isinstance(other, Colouring):
            return self.d == other.d and self._colour == other._colour
        return NotImplemented

    def __hash__(self):
        return hash((self.d, frozenset(self._colour.items())))

    def __repr__(self):
        body = ", ".join(f"({format_point(x)}): {c}" for x, c in self._colour.items())
        return f"Colouring(d={self.d}, {{{body}}})"

    def rank(self, x: Point) -> int:
        """Position of ``x`` in the labelling."""
        if self._rank is None:
            self._rank = {p: i for i, p in enumerate(self._colour)}
        return self._rank[x]

    def recoloured(self, x: Point, c: int) -> Colouring:
        if x not in self._colour:
            raise KeyError(x)
        new = dict(self._colour)
        new[x] = c
        return Colouring(new, self.d)

    def extended(self, x: Point, c: int) -> Colouring:
        if x in self._colour:
            raise ColouringError(f"{format_point(x)} is already coloured")
        new = dict(self._colour)
        new[x] = c
        return Colouring(new, self.d)

    def fingerprint(self) -> tuple[int, ...]:
        return tuple(self._colour.values())


# ---------------------------------------------------------------------------
# saturation bookkeeping


def _points_on_lines(inst: Instance, points: Iterable[Point]) -> dict[Line, list[Point]]:
    on_line: dict[Line, list[Point]] = defaultdict(list)
    for x in points:
        for fam in inst.lines_through(x):
            for l in fam:
                on_line[l].append(x)
    return on_line


def own_colour_count(line: Line, colouring: Mapping[Point, int]) -> int:
    """Number of points of the colouring on ``line`` that share its colour."""
    return sum(1 for x, c in colouring.items() if c == line.family and contains(line, x))


def own_colour_counts(inst: Instance, colouring: Mapping[Point, int]) -> dict[Line, int]:
    on_line = _points_on_lines(inst, colouring)
    return {l: sum(1 for x in on_line.get(l, ()) if colouring[x] == l.family) for l in inst.lines}


def max_own_colour_counts(inst: Instance, colouring: Mapping[Point, int]) -> list[int]:
    """Per family j, the largest number of colour-j points on a family-j line."""
    counts = own_colour_counts(inst, colouring)
    return [max((counts[l] for l in fam), default=0) for fam in inst.families]


def saturated_line(inst: Instance, colouring: Mapping[Point, int], m: int):
    """A witness ``(j, line, count)`` with count > m, or ``None``."""
    counts = own_colour_counts(inst, colouring)
    for j, fam in enumerate(inst.families, start=1):
        for l in fam:
            if counts[l] > m:
                return j, l, counts[l]
    return None


def is_unsaturated(inst: Instance, colouring: Mapping[Point, int], m: int) -> bool:
    return saturated_line(inst, colouring, m) is None


def line_condition(line: Line, colouring: Mapping[Point, int], tree_vertices, m: int) -> bool:
    """Whether ``line`` makes it into L_j^(i) given the tree prefix T_{i-1}.

    Counts the colour-j points of the colouring on the line plus the tree
    vertices on it with a different colour, and compares with m.  The
    achromatic root is never in the colouring, so it never counts.
    """
    j = line.family
    own = 0
    other = 0
    for x, c in colouring.items():
        if not contains(line, x):
            continue
        if c == j:
            own += 1
        elif x in tree_vertices:
            other += 1
    return own + other >= m


# ---------------------------------------------------------------------------
# the coloured rooted tree


@dataclass
class TreeStep:
    """Record of step i: the vertex y_i and its sets L_j^(i), I_j^(i)."""

    index: int
    vertex: Point
    lines: dict[int, tuple[Line, ...]]
    added: dict[int, tuple[Point, ...]]


@dataclass
class TreeState:
    root: Point
    colouring: Colouring
    vertices: list[Point] = field(default_factory=list)
    parent: dict = field(default_factory=dict)
    added_at: dict = field(default_factory=dict)
    steps: list[TreeStep] = field(default_factory=list)

    def __post_init__(self):
        if not self.vertices:
            self.vertices.append(self.root)
            self.parent[self.root] = None
            self.added_at[self.root] = 0

    def __contains__(self, x):
        return x in self.parent

    def colour(self, x: Point) -> int | None:
        return None if x == self.root else self.colouring[x]

    def records(self, i: int) -> dict[int, frozenset]:
        """I_j^(i) for every colour j; empty once the construction stopped."""
        d = self.colouring.d
        if i > len(self.steps):
            return {j: frozenset() for j in range(1, d + 1)}
        added = self.steps[i - 1].added
        return {j: frozenset(added.get(j, ())) for j in range(1, d + 1)}


@dataclass
class FullyConstructed:
    tree: TreeState


@dataclass
class Advanceable:
    step: int
    vertex: Point
    witnesses: tuple[int, ...]
    tree: TreeState


def build_tree(inst: Instance, colouring: Colouring, x0: Point, m: int) -> FullyConstructed | Advanceable:
    """Grow the coloured tree T(kappa) rooted at ``x0``.

    Stops at the first step whose vertex y_i has some colour j (other than
    its own) with no qualifying line through it.
    """
    if x0 in colouring:
        raise ColouringError(f"root {format_point(x0)} is already coloured")
    d = colouring.d
    on_line = _points_on_lines(inst, colouring)
    own = {l: sum(1 for x in pts if colouring[x] == l.family) for l, pts in on_line.items()}
    tree = TreeState(root=x0, colouring=colouring)

    i = 0
    while i < len(tree.vertices):
        y = tree.vertices[i]
        cy = tree.colour(y)
        through = inst.lines_through(y)
        lines: dict[int, tuple[Line, ...]] = {}
        for j in range(1, d + 1):
            if j == cy:
                continue
            keep = []
            for l in through[j - 1]:
                pts = on_line.get(l, ())
                other = sum(1 for x in pts if x in tree and colouring[x] != j)
                if own.get(l, 0) + other >= m:
                    keep.append(l)
            lines[j] = tuple(keep)
        empty = tuple(j for j, ls in lines.items() if not ls)
        if empty:
            return Advanceable(step=i + 1, vertex=y, witnesses=empty, tree=tree)

        added: dict[int, tuple[Point, ...]] = {}
        for j, ls in lines.items():
            pts = {x for l in ls for x in on_line.get(l, ()) if colouring[x] == j and x not in tree}
            added[j] = tuple(sorted(pts, key=colouring.rank))
        tree.steps.append(TreeStep(index=i + 1, vertex=y, lines=lines, added=added))
        for x in sorted((x for pts in added.values() for x in pts), key=colouring.rank):
            tree.vertices.append(x)
            tree.parent[x] = y
            tree.added_at[x] = i + 1
        i += 1
    return FullyConstructed(tree)


def extend_at_root(colouring: Colouring, x0: Point, outcome: Advanceable) -> Colouring:
    if not isinstance(outcome, Advanceable) or outcome.step != 1:
        raise ColouringError("extend_at_root needs a tree that is advanceable at step 1")
    return colouring.extended(x0, min(outcome.witnesses))


def recolour_advance(colouring: Colouring, outcome: Advanceable, j0: int | None = None) -> Colouring:
    """Give y_{i0} a witness colour j0, yielding a strictly more advanced colouring."""
    if not isinstance(outcome, Advanceable):
        raise ColouringError("recolour_advance needs an advanceable outcome")
    if outcome.step == 1:
        raise ColouringError("advanceable at step 1: use extend_at_root")
    if j0 is None:
        j0 = min(outcome.witnesses)
    elif j0 not in outcome.witnesses:
        raise ColouringError(f"colour {j0} is not a witness at step {outcome.step}")
    return colouring.recoloured(outcome.vertex, j0)


def more_advanced(inst: Instance, kappa1: Colouring, kappa2: Colouring, x0: Point, m: int) -> bool:
    """Whether ``kappa1`` is strictly more advanced than ``kappa2`` at some level.

    The two trees must agree step by step up to a level i0, where every
    I_j^(i0)(kappa1) is contained in I_j^(i0)(kappa2) and at least one
    containment is strict.  A tree that stopped at step i contributes empty
    records from step i on.
    """
    if set(kappa1) != set(kappa2):
        raise ColouringError("colourings are over different point sets")
    t1 = build_tree(inst, kappa1, x0, m).tree
    t2 = build_tree(inst, kappa2, x0, m).tree
    last = max(len(t1.steps), len(t2.steps)) + 1
    for i in range(1, last + 1):
        r1, r2 = t1.records(i), t2.records(i)
        if r1 == r2:
            continue
        return all(r1[j] <= r2[j] for j in r1)
    return False


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Points J-bar and lines L-bar from a fully constructed tree at parameter m."""

    jbar: tuple[Point, ...]
    lbar: tuple[Line, ...]
    m: int
    d: int


def extract_certificate(tree: TreeState, m: int) -> Certificate:
    jbar = tuple(v for v in tree.vertices if v != tree.root)
    seen: dict[Line, None] = {}
    for step in tree.steps:
        cy = tree.colour(step.vertex)
        for j, ls in step.lines.items():
            if j == cy:
                continue
            for l in ls:
                seen.setdefault(l, None)
    return Certificate(jbar=jbar, lbar=tuple(seen), m=m, d=tree.colouring.d)


# ---------------------------------------------------------------------------
# insertion driver


AdvanceObserver = Callable[[Colouring, Colouring, Advanceable], None]


def iteration_cap(n_coloured: int, d: int) -> int:
    return d ** min(n_coloured, 20) * n_coloured


def insert_point(
    inst: Instance,
    colouring: Colouring,
    x0: Point,
    m: int,
    observer: AdvanceObserver | None = None,
    cap: int | None = None,
) -> tuple[Colouring | Certificate, int]:
    """Add ``x0`` to an (m+1)-unsaturated colouring.

    Returns ``(result, advances)`` where result is the extended colouring or,
    if some tree is fully constructed, a :class:`Certificate`.
    """
    if x0 in colouring:
        raise ColouringError(f"{format_point(x0)} is already coloured")
    if not is_multijoint(x0, inst):
        raise ColouringError(f"{format_point(x0)} is not a multijoint")
    if cap is None:
        cap = iteration_cap(len(colouring), colouring.d)
    advances = 0
    while True:
        outcome = build_tree(inst, colouring, x0, m)
        if isinstance(outcome, FullyConstructed):
            return extract_certificate(outcome.tree, m), advances
        if outcome.step == 1:
            return extend_at_root(colouring, x0, outcome), advances
        new = recolour_advance(colouring, outcome)
        if observer is not None:
            observer(colouring, new, outcome)
        colouring = new
        advances += 1
        if advances > cap:
            raise IterationCapExceeded(
                f"{advances} recolourings while inserting {format_point(x0)} (cap {cap})"
            )


@dataclass
class ColouringRun:
    m: int
    colouring: Colouring | None = None
    certificate: Certificate | None = None
    advances: int = 0
    advances_per_insertion: list[int] = field(default_factory=list)
    failed_at: Point | None = None

    @property
    def ok(self) -> bool:
        return self.colouring is not None


def colour_multijoints(
    points: Sequence[Point],
    inst: Instance,
    m: int,
    observer: AdvanceObserver | None = None,
    check_generic: bool = True,
    cap: int | None = None,
) -> ColouringRun:
    """Insert ``points`` in order, keeping the colouring (m+1)-unsaturated.

    Aborts with a certificate at the first insertion whose tree is fully
    constructed.
    """
    if m < 0:
        raise ColouringError(f"m must be nonnegative, got {m}")
    if check_generic:
        witness = genericity_violation(inst)
        if witness is not None:
            raise NonGenericError(witness)
    if len(set(points)) != len(points):
        raise ColouringError("point list contains duplicates")
    for x in points:
        if not is_multijoint(x, inst):
            raise ColouringError(f"{format_point(x)} is not a multijoint")

    run = ColouringRun(m=m)
    colouring = Colouring(d=inst.dimension)
    for x0 in points:
        result, advances = insert_point(inst, colouring, x0, m, observer, cap)
        run.advances += advances
        run.advances_per_insertion.append(advances)
        if isinstance(result, Certificate):
            log.debug("insertion of %s failed at m=%d", format_point(x0), m)
            run.certificate = result
            run.failed_at = x0
            return run
        colouring = result
    witness = saturated_line(inst, colouring, m)
    if witness is not None:
        raise AssertionError(f"produced a saturated colouring at m={m}: {witness}")
    run.colouring = colouring
    return run


def integer_root_ceil(n: int, d: int) -> int:
    """Smallest integer r >= 0 with r**d >= n."""
    r = round(n ** (1.0 / d)) if n else 0
    while r**d < n:
        r += 1
    while r > 0 and (r - 1) ** d >= n:
        r -= 1
    return r


def colour_auto(
    points: Sequence[Point],
    inst: Instance,
    observer: AdvanceObserver | None = None,
    cap: int | None = None,
) -> ColouringRun:
    """Run with m = ceil(|J|^(1/d)), doubling m after each failure."""
    witness = genericity_violation(inst)
    if witness is not None:
        raise NonGenericError(witness)
    m = integer_root_ceil(len(points), inst.dimension)
    while True:
        run = colour_multijoints(points, inst, m, observer, check_generic=False, cap=cap)
        if run.ok:
            return run
        m *= 2


def trivial_extra_colour(points: Iterable[Point], d: int) -> dict[Point, int]:
    return {x: d + 1 for x in points}


# ---------------------------------------------------------------------------
# density functions S_j


@dataclass
class DensityFunctions:
    d: int
    values: dict[int, dict[Point, Fraction | int]]

    def __call__(self, j: int, x: Point):
        return self.values.get(j, {}).get(x, 0)


def colouring_to_density(colouring: Colouring) -> DensityFunctions:
    d = colouring.d
    values = {j: {x: (d if c == j else 0) for x, c in colouring.items()} for j in range(1, d + 1)}
    return DensityFunctions(d=d, values=values)


@dataclass
class DensityReport:
    pointwise_failures: list[Point]
    line_failures: list[tuple[Line, Fraction | int]]

    @property
    def ok(self) -> bool:
        return not self.pointwise_failures and not self.line_failures

    def __bool__(self):
        return self.ok


def verify_density(S: DensityFunctions, points: Iterable[Point], inst: Instance, bound) -> DensityReport:
    """Check chi_J <= (1/d) sum_j S_j pointwise, and the per-line sums against ``bound``."""
    d = inst.dimension
    points = list(points)
    pointwise = [x for x in points if sum(S(j, x) for j in range(1, d + 1)) < d]
    on_line = _points_on_lines(inst, points)
    lines = []
    for l in inst.lines:
        total = sum(S(l.family, x) for x in on_line.get(l, ()))
        if total > bound:
            lines.append((l, total))
    return DensityReport(pointwise, lines)
