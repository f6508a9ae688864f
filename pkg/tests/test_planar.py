import pytest

from multijoints.colouring import Colouring, ColouringError, colour_auto, is_unsaturated, own_colour_count
from multijoints.field import PrimeField
from multijoints.geometry import Instance
from multijoints.generators import monkey_bar, random_generic_instance
from multijoints.planar import BLUE, RED, planar_bound, two_colour_bijoints

F = PrimeField(101)


def worst_line(inst, kappa):
    return max((own_colour_count(l, kappa) for l in inst.lines), default=0)


def test_planar_bound_is_exact_floor():
    for n in range(0, 500):
        k = planar_bound(n)
        assert k * k <= 2 * n < (k + 1) ** 2


def test_monkey_bar_2_all_blue():
    inst = monkey_bar(2, 2, F)
    J = inst.point_set()
    kappa = two_colour_bijoints(inst, J)
    assert set(kappa.values()) == {BLUE}
    assert all(own_colour_count(l, kappa) == 0 for l in inst.families[1])


def test_monkey_bar_8_all_blue_and_bounded():
    inst = monkey_bar(8, 2, F)
    J = inst.point_set()
    kappa = two_colour_bijoints(inst, J)
    assert len(J) == 64 and planar_bound(64) == 11
    assert set(kappa.values()) == {BLUE}
    assert is_unsaturated(inst, kappa, 11)


def test_empty_point_set():
    inst = monkey_bar(2, 2, F)
    assert two_colour_bijoints(inst, []) == Colouring(d=2)


def test_heavy_blue_lines_go_red():
    # a 3 x 8 grid: blue rows carry 8 points and 64 > 2 * 24, columns carry 3
    rows = monkey_bar(8, 2, F)
    blue = [l for l in rows.families[0] if 1 <= l.base[1].value <= 3]
    inst = Instance(F, 2, [blue, rows.families[1]])
    J = inst.point_set()
    assert len(J) == 24
    kappa = two_colour_bijoints(inst, J)
    assert set(kappa.values()) == {RED}
    assert worst_line(inst, kappa) == 3 <= planar_bound(24)


def test_needs_plane():
    inst = monkey_bar(2, 3, F)
    with pytest.raises(ColouringError):
        two_colour_bijoints(inst, inst.point_set())


@pytest.mark.parametrize("seed", range(25))
def test_bound_on_random_planar_instances(seed):
    inst = random_generic_instance(seed, 2, F, 3 + seed % 6)
    J = inst.point_set()
    kappa = two_colour_bijoints(inst, J)
    assert kappa == two_colour_bijoints(inst, J)
    for l in inst.lines:
        assert own_colour_count(l, kappa) ** 2 <= 2 * len(J)
    run = colour_auto(J, inst)
    assert run.ok and is_unsaturated(inst, run.colouring, run.m)
