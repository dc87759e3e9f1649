import numpy as np

import core.logger.log as log
from core.exceptions import ScheduleError
from core.schema.schedule import Schedule, ScheduleMode

logger = log.setup_custom_logger(__name__)


def build_schedule(graph, classes, mode=ScheduleMode.CYCLIC, frozen=()):
    """
    Wraps classes into a Schedule after checking them against the graph:
    every class independent and pairwise disjoint, and the classes cover
    the vertex set (minus frozen vertices in frozen mode).

    Raises:
        ScheduleError
    """
    schedule = Schedule(classes=tuple(classes), mode=mode, frozen=tuple(frozen))

    for i, members in enumerate(schedule.classes):
        for x in members:
            graph.check_vertex(x)
        edge = graph.is_independent(members)
        if edge is not None:
            raise ScheduleError(f'Class {i} is not independent: edge {edge}')

    scheduled = schedule.scheduled_vertices()
    if len(set(scheduled)) != len(scheduled):
        raise ScheduleError('A vertex appears in more than one class')

    if schedule.is_cyclic and schedule.frozen:
        raise ScheduleError('Cyclic schedules cannot freeze vertices')

    expected = sorted(set(range(graph.vertex_count)) - set(schedule.frozen))
    if scheduled != expected:
        raise ScheduleError(
            f'Classes cover {len(scheduled)} vertices, expected '
            f'{len(expected)} ({schedule.mode.value} mode)'
        )

    return schedule


def _greedy_classes(graph, vertices):
    # smallest color unused by already-colored neighbours, in the given order
    adjacency = graph.adjacency
    colors = {}
    classes = []

    for x in vertices:
        taken = {colors[y] for y in adjacency[x] if y in colors}
        color = 0
        while color in taken:
            color += 1
        colors[x] = color
        if color == len(classes):
            classes.append([])
        classes[color].append(x)

    return classes


def greedy_schedule(graph):
    """
    Proper greedy coloring in ascending vertex-id order; its color classes,
    at most max_degree + 1 of them, form the cyclic schedule.

    Returns:
        Schedule
    """
    classes = _greedy_classes(graph, range(graph.vertex_count))
    schedule = build_schedule(graph, classes)

    logger.info(f'Greedy schedule with period {schedule.period} on {graph!r}')

    return schedule


def singleton_schedule(graph, order):
    """
    One singleton class per vertex, visited in the given order.

    Raises:
        ScheduleError: if order is not a permutation of the vertices.
    """
    order = [int(x) for x in order]
    if sorted(order) != list(range(graph.vertex_count)):
        raise ScheduleError('Singleton schedule order is not a permutation '
                            f'of 0..{graph.vertex_count - 1}')

    return build_schedule(graph, [[x] for x in order])


def seeded_order(vertex_count, seed):
    """Seeded permutation of the vertices (numpy PCG64 stream)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.permutation(vertex_count).tolist()


def frozen_boundary_schedule(graph, frozen):
    """
    Greedy classes over the vertices outside frozen; frozen vertices are
    never scheduled, so the repetitiveness hypothesis fails there. Only for
    truncation experiments.
    """
    frozen = sorted(set(int(x) for x in frozen))
    free = sorted(set(range(graph.vertex_count)) - set(frozen))
    classes = _greedy_classes(graph, free)

    schedule = build_schedule(graph, classes, mode=ScheduleMode.FROZEN,
                              frozen=frozen)
    logger.info(f'Frozen-boundary schedule: period {schedule.period}, '
                f'{len(frozen)} frozen vertices (experiment)')

    return schedule


def nth_class(schedule, n):
    """The set X_n = classes[n mod period]."""
    return schedule.nth_class(n)
