"""Ground truth for small instances.

``brute_force_min_saturation`` searches every d-colouring (depth-first in
lexicographic order, pruning branches that can no longer beat the best
found).  ``verify_certificate`` checks the two hypotheses a non-advanceable
tree is supposed to deliver.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .colouring import Certificate, Colouring
from .geometry import Instance, Point, contains, directions_span, format_point

SEARCH_LIMIT = 10**7


class OracleTooLarge(ValueError):
    pass


def brute_force_min_saturation(points: Sequence[Point], inst: Instance, limit: int = SEARCH_LIMIT):
    """Minimum over all d-colourings of the largest own-colour line count.

    Returns ``(m_star, witness)``; the witness is the lexicographically first
    colouring (colours ordered 1..d, points in the given order) attaining it.
    """
    d = inst.dimension
    points = list(points)
    n = len(points)
    if d**n > limit:
        raise OracleTooLarge(f"{d}^{n} colourings exceed the search limit {limit}")
    if n == 0:
        return 0, Colouring(d=d)

    # for each point and colour, the own-colour lines that colour would load
    all_lines = inst.lines
    loads = []
    for x in points:
        loads.append([[k for k, l in enumerate(all_lines) if l.family == j and contains(l, x)] for j in range(1, d + 1)])

    counts = [0] * len(all_lines)
    assignment = [0] * n
    best = n + 1
    best_assignment = None

    def search(i: int, running: int):
        nonlocal best, best_assignment
        if running >= best:
            return
        if i == n:
            best = running
            best_assignment = list(assignment)
            return
        for j in range(1, d + 1):
            hit = loads[i][j - 1]
            peak = running
            for k in hit:
                counts[k] += 1
                if counts[k] > peak:
                    peak = counts[k]
            assignment[i] = j
            search(i + 1, peak)
            for k in hit:
                counts[k] -= 1

    search(0, 0)
    return best, Colouring(zip(points, best_assignment), d=d)


def exhaustive_min_saturation(points: Sequence[Point], inst: Instance, limit: int = SEARCH_LIMIT) -> int:
    """Plain enumeration of all d^|J| colourings, no pruning.  Slow; for cross-checks."""
    d = inst.dimension
    points = list(points)
    if d ** len(points) > limit:
        raise OracleTooLarge(f"{d}^{len(points)} colourings exceed the search limit {limit}")
    incident = [[(k, l.family) for k, l in enumerate(inst.lines) if contains(l, x)] for x in points]
    best = None
    for colours in product(range(1, d + 1), repeat=len(points)):
        counts: dict[int, int] = {}
        for inc, c in zip(incident, colours):
            for k, fam in inc:
                if fam == c:
                    counts[k] = counts.get(k, 0) + 1
        worst = max(counts.values(), default=0)
        if best is None or worst < best:
            best = worst
    return 0 if best is None else best


@dataclass
class CertificateCheck:
    ok: bool
    hypothesis: str = ""
    detail: str = ""

    def __bool__(self):
        return self.ok


def verify_certificate(cert: Certificate) -> CertificateCheck:
    """Check that J-bar consists of joints of L-bar and every L-bar line meets J-bar in >= m points.

    The joint property is checked through the family structure: each point
    must lie on a line of every family L-bar_j, and some such choice must
    have spanning directions.
    """
    d = cert.d
    for x in cert.jbar:
        incident = [[l for l in cert.lbar if l.family == j and contains(l, x)] for j in range(1, d + 1)]
        missing = [j for j, ls in enumerate(incident, start=1) if not ls]
        if missing:
            return CertificateCheck(
                False, "joint", f"{format_point(x)} lies on no certificate line of family {missing[0]}"
            )
        if not any(directions_span(combo) for combo in product(*incident)):
            return CertificateCheck(False, "joint", f"certificate lines through {format_point(x)} do not span")
    for l in cert.lbar:
        hits = sum(1 for x in cert.jbar if contains(l, x))
        if hits < cert.m:
            return CertificateCheck(False, "line-count", f"line {l} meets J-bar in {hits} < {cert.m} points")
    return CertificateCheck(True)
