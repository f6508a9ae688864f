from __future__ import annotations

import random

import pytest

from multijoints.field import PrimeField, QQ
from multijoints.geometry import Instance, InstanceError, Line, make_point

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def F101():
    return PrimeField(101)


@pytest.fixture
def F7():
    return PrimeField(7)


def pt(fld, *coords):
    return make_point(fld, coords)


def line(fld, base, direction, family):
    return Line(make_point(fld, base), make_point(fld, direction), family)


def random_instance(rng: random.Random, fld: PrimeField, d: int, per_family: int) -> Instance:
    """Arbitrary (not necessarily generic) instance over a small prime field."""
    p = fld.p
    seen = set()
    families = []
    for j in range(1, d + 1):
        fam = []
        tries = 0
        while len(fam) < per_family and tries < 200:
            tries += 1
            w = [rng.randrange(p) for _ in range(d)]
            if not any(w):
                continue
            l = line(fld, [rng.randrange(p) for _ in range(d)], w, j)
            if l in seen:
                continue
            seen.add(l)
            fam.append(l)
        families.append(fam)
    return Instance(fld, d, families)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
