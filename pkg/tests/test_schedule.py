import networkx as nx
import pytest

from core.exceptions import ScheduleError
from core.operators.generator import GeneratorOperator
from core.operators.graph import validate_graph
from core.operators.schedule import (
    build_schedule,
    frozen_boundary_schedule,
    greedy_schedule,
    nth_class,
    seeded_order,
    singleton_schedule,
)
from core.schema.schedule import ScheduleMode


def test_greedy_single_edge(single_edge):
    assert greedy_schedule(single_edge).classes == ((0,), (1,))


def test_greedy_triangle_needs_three_classes(triangle):
    assert greedy_schedule(triangle).classes == ((0,), (1,), (2,))


def test_greedy_four_cycle(four_cycle):
    assert greedy_schedule(four_cycle).classes == ((0, 2), (1, 3))


def test_greedy_classes_are_independent(as_networkx):
    graph = GeneratorOperator().generate('random_regular:60,5')
    schedule = greedy_schedule(graph)
    g = as_networkx(graph)

    assert schedule.period <= graph.max_degree + 1
    for members in schedule.classes:
        assert g.subgraph(members).number_of_edges() == 0
    assert schedule.scheduled_vertices() == list(range(60))


def test_greedy_empty_graph(empty3):
    assert greedy_schedule(empty3).classes == ((0, 1, 2),)


def test_singleton_identity():
    graph = validate_graph(3, [])
    assert singleton_schedule(graph, [0, 1, 2]).classes == ((0,), (1,), (2,))


def test_singleton_single_vertex():
    assert singleton_schedule(validate_graph(1, []), [0]).classes == ((0,),)


def test_singleton_reversed(path3):
    assert singleton_schedule(path3, [2, 1, 0]).classes == ((2,), (1,), (0,))


def test_singleton_needs_permutation(path3):
    with pytest.raises(ScheduleError):
        singleton_schedule(path3, [0, 0, 1])


def test_seeded_order_is_reproducible():
    assert seeded_order(50, 9) == seeded_order(50, 9)
    assert sorted(seeded_order(50, 9)) == list(range(50))
    assert seeded_order(50, 9) != seeded_order(50, 10)


def test_nth_class_is_modular(four_cycle):
    schedule = greedy_schedule(four_cycle)
    assert nth_class(schedule, 5) == schedule.classes[1]
    assert nth_class(schedule, 0) == schedule.classes[0]


def test_nth_class_rejects_negative(four_cycle):
    with pytest.raises(ScheduleError):
        nth_class(greedy_schedule(four_cycle), -1)


def test_dependent_class_rejected(four_cycle):
    with pytest.raises(ScheduleError, match='not independent'):
        build_schedule(four_cycle, [(0, 1), (2,), (3,)])


def test_overlapping_classes_rejected(four_cycle):
    with pytest.raises(ScheduleError, match='more than one'):
        build_schedule(four_cycle, [(0, 2), (1, 3), (0,)])


def test_missing_vertex_rejected(four_cycle):
    with pytest.raises(ScheduleError, match='cover'):
        build_schedule(four_cycle, [(0, 2), (1,)])


def test_frozen_boundary_skips_frozen(path5):
    schedule = frozen_boundary_schedule(path5, [0, 4])
    assert schedule.mode is ScheduleMode.FROZEN
    assert not schedule.is_cyclic
    assert schedule.frozen == (0, 4)
    assert schedule.scheduled_vertices() == [1, 2, 3]


def test_cyclic_schedule_cannot_freeze(path3):
    with pytest.raises(ScheduleError):
        build_schedule(path3, [(0, 2), (1,)], frozen=(1,))


def test_greedy_matches_networkx_order(as_networkx):
    graph = GeneratorOperator().generate('grid:7,5')
    ours = greedy_schedule(graph)
    theirs = nx.greedy_color(as_networkx(graph),
                             strategy=lambda g, colors: sorted(g))
    for index, members in enumerate(ours.classes):
        assert all(theirs[x] == index for x in members)
