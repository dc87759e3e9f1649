from fractions import Fraction

import numpy as np

import core.logger.log as log
from core.exceptions import (
    ConvergenceError,
    FlipError,
    MeasureError,
    ScheduleError,
)
from core.operators.graph import gather_neighbors
from core.operators.schedule import greedy_schedule
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure
from core.schema.trace import RoundRecord, RunStatus, RunTrace

logger = log.setup_custom_logger(__name__)

ENGINES = ('incremental', 'naive')


def same_diff_counts(graph, coloring, x):
    """
    Counts the neighbours of x sharing its color and those that do not.

    Returns:
        (int, int): (same, diff), summing to the degree of x.
    """
    color = coloring[x]
    same = sum(1 for y in graph.neighbors(x) if coloring[y] == color)
    return same, graph.degree(x) - same


def same_counts(graph, coloring):
    """Same-colored neighbour count of every vertex, recomputed from scratch."""
    colors = _colors(coloring)
    agree = colors[graph.owners] == colors[graph.indices]
    counts = np.bincount(graph.owners, weights=agree,
                         minlength=graph.vertex_count)
    return counts.astype(np.int64)


def _colors(coloring):
    return coloring.colors if isinstance(coloring, Coloring) else coloring


def flip_decisions(same, degrees):
    """The flip rule: same-colored neighbours strictly outnumber the rest."""
    return 2 * same > degrees


def fixed_points(graph, colors):
    """
    Marks the rows of a (k, n) 0/1 color matrix that no single-vertex
    round of the flip rule changes.
    """
    colors = np.atleast_2d(np.asarray(colors))
    same = np.zeros(colors.shape, dtype=np.int64)
    for x in range(graph.vertex_count):
        neighbors = np.asarray(graph.neighbors(x), dtype=np.int64)
        same[:, x] = (colors[:, neighbors] == colors[:, [x]]).sum(axis=1)

    return ~flip_decisions(same, graph.degrees).any(axis=1)


def _class_same(graph, colors, members):
    # same-colored neighbour counts for the listed vertices only
    owners, neighbors = gather_neighbors(graph, members)
    agree = (colors[owners] == colors[neighbors]).astype(np.int64)
    slot = np.repeat(np.arange(len(members), dtype=np.int64),
                     graph.degrees[members])
    return np.bincount(slot, weights=agree, minlength=len(members)).astype(
        np.int64)


def flip_round(graph, coloring, members):
    """
    One anti-majority round: each x in members flips when its differently
    colored neighbours are strictly fewer than its same-colored ones, all
    decisions read against the incoming coloring.

    Args:
        graph (FiniteGraph):
            The graph G.

        coloring (Coloring):
            The coloring c_n before the round.

        members (iterable):
            The scheduled class X_n; must be G-independent.

    Returns:
        (Coloring, tuple): c_{n+1} and the flipped set B_n in ascending order.

    Raises:
        GraphError: if a member is not a vertex of the graph.
        ScheduleError: if members is not independent.
    """
    members = np.unique(np.asarray(list(members), dtype=np.int64))
    for x in members.tolist():
        graph.check_vertex(x)

    edge = graph.is_independent(members)
    if edge is not None:
        raise ScheduleError(f'Flip class is not independent: edge {edge}')

    if members.size == 0:
        return coloring, ()

    same = _class_same(graph, coloring.colors, members)
    flipped = members[flip_decisions(same, graph.degrees[members])]

    return coloring.flipped(flipped), tuple(flipped.tolist())


def potential_numerator(graph, measure, same):
    # numerator of M over measure.denominator
    return int((measure.array * same).sum())


def potential_M(graph, measure, coloring):
    """
    Weighted size of the monochromatic subgraph:
    M = sum over x of mu(x) * #{y adjacent to x with the same color}.
    Zero exactly when the coloring is proper.
    """
    _check_measure(graph, measure)
    return Fraction(potential_numerator(graph, measure,
                                        same_counts(graph, coloring)),
                    measure.denominator)


def cost(graph, measure):
    """Half the measure-weighted average degree."""
    _check_measure(graph, measure)
    total = int((measure.array * graph.degrees).sum())
    return Fraction(total, 2 * measure.denominator)


def monochrome_edges(graph, coloring):
    return int(same_counts(graph, coloring).sum()) // 2


def is_unfriendly(graph, coloring):
    """
    Recomputes every same/diff count and checks diff >= same everywhere.

    Returns:
        (bool, tuple): the verdict and the violating vertices.
    """
    same = same_counts(graph, coloring)
    violators = np.flatnonzero(2 * same > graph.degrees)
    return violators.size == 0, tuple(violators.tolist())


def _check_measure(graph, measure):
    if measure.vertex_count != graph.vertex_count:
        raise MeasureError(
            f'Measure has {measure.vertex_count} weights for a graph with '
            f'{graph.vertex_count} vertices'
        )


def default_max_rounds(graph, schedule):
    """(|E| + 1) * period rounds always suffice for a cyclic schedule."""
    return max(1, (graph.edge_count + 1) * schedule.period)


class DynamicsOperator:
    """
    Runs the flip sequence of a graph under a schedule, tracking the
    weighted potential M of the monochromatic subgraph exactly.

    The incremental engine keeps a same-color counter per vertex and
    touches only the neighbours of flipped vertices; the naive engine
    recounts everything every round. Both produce identical traces.
    """

    def __init__(self, graph, measure=None, schedule=None,
                 engine='incremental'):

        if engine not in ENGINES:
            raise FlipError(f'Unknown engine {engine!r}, expected one of '
                             f'{ENGINES}')

        self.graph = graph
        if measure is None:
            measure = VertexMeasure.uniform(graph.vertex_count)
        if schedule is None:
            schedule = greedy_schedule(graph)

        self.measure = measure
        self.schedule = schedule
        self.engine = engine

        _check_measure(graph, self.measure)
        self.weights = self.measure.array
        self.class_arrays = [np.asarray(c, dtype=np.int64)
                             for c in self.schedule.classes]

    def _reset(self, initial):
        if len(initial) != self.graph.vertex_count:
            raise FlipError(f'Initial coloring has {len(initial)} colors '
                             f'for {self.graph.vertex_count} vertices')

        self.colors = initial.colors.copy()
        self.same = same_counts(self.graph, self.colors)
        self.potential = potential_numerator(self.graph, self.measure,
                                             self.same)
        self.monochrome = int(self.same.sum()) // 2

    def _recount(self):
        self.same = same_counts(self.graph, self.colors)
        self.potential = potential_numerator(self.graph, self.measure,
                                             self.same)
        self.monochrome = int(self.same.sum()) // 2

    def _apply(self, flipped):
        graph = self.graph
        owners, neighbors = gather_neighbors(graph, flipped)

        # neighbours that agreed with a flipped vertex lose one, others gain
        delta = np.where(self.colors[neighbors] == self.colors[owners], -1, 1)
        before = self.same[flipped]
        own = graph.degrees[flipped] - 2 * before

        self.potential += int((self.weights[flipped] * own).sum())
        self.potential += int((self.weights[neighbors] * delta).sum())
        self.monochrome += int(own.sum())

        self.same[flipped] = graph.degrees[flipped] - before
        np.add.at(self.same, neighbors, delta)
        self.colors[flipped] ^= 1

    def step(self, n):
        """Executes round n and returns its RoundRecord."""
        index = self.schedule.class_index(n)
        members = (self.class_arrays[index] if self.class_arrays
                   else np.zeros(0, dtype=np.int64))

        if self.engine == 'naive':
            self._recount()

        potential_before = self.potential
        monochrome_before = self.monochrome

        if members.size:
            decide = self.same[members]
            flipped = members[flip_decisions(decide,
                                              self.graph.degrees[members])]
        else:
            flipped = members

        if flipped.size:
            if self.engine == 'naive':
                self.colors[flipped] ^= 1
                self._recount()
            else:
                self._apply(flipped)

        denominator = self.measure.denominator
        record = RoundRecord(
            index=n,
            class_index=index,
            flipped=tuple(flipped.tolist()),
            flipped_mass=Fraction(int(self.weights[flipped].sum()),
                                  denominator),
            potential_before=Fraction(potential_before, denominator),
            potential_after=Fraction(self.potential, denominator),
            monochrome_before=monochrome_before,
            monochrome_after=self.monochrome,
        )
        logger.debug(f'Round {n} (class {index}): {len(record.flipped)} '
                     f'flips, M {record.potential_before} -> '
                     f'{record.potential_after}')

        return record

    def run(self, initial=None, max_rounds=None):
        """
        Iterates rounds until a full period passes without a flip or the
        budget is spent.

        Args:
            initial (Coloring):
                c_0; the constant 0 coloring when omitted.

            max_rounds (int):
                Round budget. Defaults to (|E| + 1) * period for cyclic
                schedules; frozen-boundary schedules need an explicit one.

        Returns:
            RunTrace

        Raises:
            ConvergenceError: a cyclic run exhausted a budget of at least
            (|E| + 1) * period rounds.
        """
        graph, schedule = self.graph, self.schedule
        if initial is None:
            initial = Coloring.zeros(graph.vertex_count)
        sufficient = default_max_rounds(graph, schedule)

        if max_rounds is None:
            if not schedule.is_cyclic:
                raise ScheduleError('Frozen-boundary runs need an explicit '
                                    'max_rounds')
            max_rounds = sufficient
        if max_rounds < 1:
            raise FlipError(f'max_rounds must be at least 1, got {max_rounds}')

        self._reset(initial)
        rounds = []
        quiet = 0
        status = RunStatus.MAX_ROUNDS_EXCEEDED

        if schedule.period == 0:
            status = RunStatus.CONVERGED
        else:
            for n in range(max_rounds):
                record = self.step(n)
                rounds.append(record)
                quiet = 0 if record.flipped else quiet + 1
                if quiet >= schedule.period:
                    status = RunStatus.CONVERGED
                    break

        trace = RunTrace(
            rounds=tuple(rounds),
            initial_coloring=initial,
            final_coloring=Coloring(self.colors.copy()),
            status=status,
            total_flips=sum(len(r.flipped) for r in rounds),
            period=schedule.period,
            mode=schedule.mode.value,
        )

        logger.info(f'{self.engine} run on {graph!r}: {status.value} after '
                    f'{len(rounds)} rounds, {trace.total_flips} flips')

        if (not trace.converged and schedule.is_cyclic
                and max_rounds >= sufficient):
            raise ConvergenceError(
                f'Cyclic run did not converge within {max_rounds} rounds',
                round_index=len(rounds) - 1,
                values={'max_rounds': max_rounds, 'bound': sufficient},
            )

        return trace


def run(graph, measure, schedule, initial=None, max_rounds=None,
        engine='incremental'):
    """Functional entry point around DynamicsOperator.run."""
    operator = DynamicsOperator(graph, measure=measure, schedule=schedule,
                                engine=engine)
    return operator.run(initial=initial, max_rounds=max_rounds)
