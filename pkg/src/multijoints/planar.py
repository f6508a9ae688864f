"""Direct two-colouring of bijoints in the plane.

Family 1 is "blue", family 2 is "red".  A blue line carrying at most
sqrt(2 |J|) bijoints gets all of them coloured blue; every other bijoint is
red.  Comparisons are done on squares, so no irrational numbers appear.
"""

from __future__ import annotations

from math import isqrt
from typing import Sequence

from .colouring import Colouring, ColouringError
from .geometry import Instance, Point

BLUE, RED = 1, 2


def planar_bound(n_points: int) -> int:
    """Largest integer k with k*k <= 2*n_points."""
    return isqrt(2 * n_points)


def two_colour_bijoints(inst: Instance, points: Sequence[Point]) -> Colouring:
    if inst.dimension != 2:
        raise ColouringError(f"planar colouring needs d = 2, got d = {inst.dimension}")
    points = list(points)
    n = len(points)
    blue_lines = inst.families[0]
    on_line = {l: [x for x in points if l in inst.lines_through(x)[0]] for l in blue_lines}
    blue = set()
    for l, pts in on_line.items():
        if len(pts) ** 2 <= 2 * n:
            blue.update(pts)
    return Colouring({x: BLUE if x in blue else RED for x in points}, d=2)
