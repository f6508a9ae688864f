"""Instance constructions: the jungle-gym grid, the three-colour example, random generic families."""

from __future__ import annotations

import random
from itertools import product

from .field import Field, PrimeField
from .geometry import Instance, InstanceError, Line, is_generic, make_point, multijoints

DEFAULT_REJECTION_BUDGET = 1000

# direction tilts tried, in order, for the lines added through plane lattice points
TRICOLOUR_TILTS = [(1, 2), (1, 1), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2), (1, 4), (4, 1)]


class GenerationError(RuntimeError):
    pass


def _check_room(N: int, fld: Field):
    if isinstance(fld, PrimeField) and fld.p <= N:
        raise InstanceError(f"field F_{fld.p} is too small to hold coordinates 1..{N}; need p > {N}")


def _unit(d: int, k: int) -> list[int]:
    return [1 if i == k else 0 for i in range(d)]


def monkey_bar(N: int, d: int, fld: Field) -> Instance:
    """Axis-parallel grid: family j holds the N^(d-1) lines parallel to e_j over {1..N}^(d-1).

    Its multijoints are exactly the N^d points of {1..N}^d.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    _check_room(N, fld)
    families = []
    for j in range(d):
        fam = []
        for rest in product(range(1, N + 1), repeat=d - 1):
            base = list(rest[:j]) + [0] + list(rest[j:])
            fam.append(Line(make_point(fld, base), make_point(fld, _unit(d, j)), j + 1))
        families.append(fam)
    return Instance(fld, d, families)


def _tricolour_lines(N: int, fld: Field, tilt) -> list[list[Line]]:
    families: list[list[Line]] = [[], [], []]

    def add(base, direction, family):
        families[family - 1].append(Line(make_point(fld, base), make_point(fld, direction), family))

    # family k (0-based) is parallel to e_k and sits on the two coordinate
    # axes other than the k-th one
    for k in range(3):
        for other in ((k + 1) % 3, (k + 2) % 3):
            for j in range(1, N + 1):
                base = [0, 0, 0]
                base[other] = j
                add(base, _unit(3, k), k + 1)
    # the plane x_k = 0 carries the lattice of the other two families; put a
    # family-k line through each lattice point, tilted so that it meets no
    # other pair of lines
    a, b = tilt
    for k in range(3):
        for u, v in product(range(1, N + 1), repeat=2):
            base = [0, 0, 0]
            base[(k + 1) % 3], base[(k + 2) % 3] = u, v
            direction = [0, 0, 0]
            direction[k], direction[(k + 1) % 3], direction[(k + 2) % 3] = 1, a, b
            add(base, direction, k + 1)
    return families


def tricolour_necessity(N: int, fld: Field) -> Instance:
    """The three-family example in F^3 whose 3N^2 multijoints need all three colours.

    Raises :class:`GenerationError` if no tilt in ``TRICOLOUR_TILTS`` yields
    exactly 3N^2 multijoints on a generic family (possible only for tiny p).
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    _check_room(N, fld)
    for tilt in TRICOLOUR_TILTS:
        try:
            inst = Instance(fld, 3, _tricolour_lines(N, fld, tilt))
        except InstanceError:
            continue
        if len(multijoints(inst)) == 3 * N * N and is_generic(inst):
            return inst
    raise GenerationError(f"no valid tricolour construction for N={N} over {fld}")


def random_generic_instance(
    seed: int,
    d: int,
    fld: PrimeField,
    lines_per_family: int,
    budget: int = DEFAULT_REJECTION_BUDGET,
) -> Instance:
    """Random lines through a small pool of anchor points, resampled until generic.

    Each line either joins two anchors or passes through one anchor in a
    random direction.  Anchors make lines from different families actually
    meet, which random lines in d >= 3 almost never do.  Same seed, same
    instance.
    """
    if not isinstance(fld, PrimeField):
        raise ValueError("random instances need a prime field")
    if d < 2 or lines_per_family < 1:
        raise ValueError("need d >= 2 and lines_per_family >= 1")
    rng = random.Random(seed)
    p = fld.p
    n_anchors = max(2, lines_per_family)
    draws = 0

    def random_direction():
        while True:
            w = [rng.randrange(p) for _ in range(d)]
            if any(w):
                return w

    for _ in range(budget):
        anchors = [[rng.randrange(p) for _ in range(d)] for _ in range(n_anchors)]
        seen: set[Line] = set()
        families = []
        for j in range(1, d + 1):
            fam = []
            while len(fam) < lines_per_family:
                draws += 1
                if draws > budget * lines_per_family * d * 10:
                    raise GenerationError(f"rejection budget {budget} exhausted drawing lines")
                a, b = rng.sample(range(n_anchors), 2)
                base = anchors[a]
                direction = [(u - v) % p for u, v in zip(anchors[b], base)]
                if rng.random() < 0.5 or not any(direction):
                    direction = random_direction()
                line = Line(make_point(fld, base), make_point(fld, direction), j)
                if line in seen:
                    continue
                seen.add(line)
                fam.append(line)
            families.append(fam)
        inst = Instance(fld, d, families)
        if is_generic(inst):
            return inst
    raise GenerationError(f"no generic instance within {budget} attempts (seed {seed})")
