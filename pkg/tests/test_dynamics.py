from fractions import Fraction

import numpy as np
import pytest

from core.exceptions import FlipError, GraphError, ScheduleError
from core.operators.dynamics import (
    DynamicsOperator,
    cost,
    default_max_rounds,
    flip_round,
    is_unfriendly,
    monochrome_edges,
    potential_M,
    run,
    same_counts,
    same_diff_counts,
)
from core.operators.generator import GeneratorOperator
from core.operators.graph import validate_graph
from core.operators.measures import ball_measure, restrict_ball_measure
from core.operators.schedule import (
    frozen_boundary_schedule,
    greedy_schedule,
    seeded_order,
    singleton_schedule,
)
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure
from core.schema.trace import RunStatus

ALTERNATING = Coloring([1, 0, 1, 0])


class TestCounts:

    def test_all_zero(self, four_cycle, zeros):
        assert same_diff_counts(four_cycle, zeros(4), 0) == (2, 0)

    def test_alternating(self, four_cycle):
        assert same_diff_counts(four_cycle, ALTERNATING, 0) == (0, 2)

    def test_isolated_vertex(self, zeros):
        graph = validate_graph(1, [])
        assert same_diff_counts(graph, zeros(1), 0) == (0, 0)

    def test_vectorized_matches_scalar(self):
        graph = GeneratorOperator().generate('erdos_renyi_capped:40,4,6')
        coloring = Coloring(np.random.default_rng(3).integers(0, 2, 40))
        same = same_counts(graph, coloring)
        for x in range(40):
            assert same[x] == same_diff_counts(graph, coloring, x)[0]


class TestFlipRound:

    def test_both_flip(self, four_cycle, zeros):
        after, flipped = flip_round(four_cycle, zeros(4), {0, 2})
        assert after == ALTERNATING
        assert flipped == (0, 2)

    def test_fixed_point(self, four_cycle):
        after, flipped = flip_round(four_cycle, ALTERNATING, {0, 2})
        assert after == ALTERNATING
        assert flipped == ()

    def test_path_middle(self, path3, zeros):
        after, flipped = flip_round(path3, zeros(3), {1})
        assert after.to_list() == [0, 1, 0]
        assert flipped == (1,)

    def test_tie_does_not_flip(self, path3):
        coloring = Coloring([0, 0, 1])
        after, flipped = flip_round(path3, coloring, {1})
        assert flipped == ()
        assert after == coloring

    def test_dependent_class(self, four_cycle, zeros):
        with pytest.raises(ScheduleError):
            flip_round(four_cycle, zeros(4), {0, 1})

    def test_vertex_out_of_range(self, path3, zeros):
        with pytest.raises(GraphError, match='Vertex 5'):
            flip_round(path3, zeros(3), [5])

    def test_order_does_not_matter(self, four_cycle, zeros):
        assert (flip_round(four_cycle, zeros(4), [2, 0])
                == flip_round(four_cycle, zeros(4), [0, 2]))


class TestPotential:

    def test_four_cycle_all_zero(self, four_cycle, uniform, zeros):
        assert potential_M(four_cycle, uniform(4), zeros(4)) == 2

    def test_proper_coloring(self, four_cycle, uniform):
        assert potential_M(four_cycle, uniform(4), ALTERNATING) == 0

    def test_path(self, path3, uniform, zeros):
        assert potential_M(path3, uniform(3), zeros(3)) == Fraction(4, 3)

    def test_cost(self, four_cycle, single_edge, empty3, uniform):
        assert cost(four_cycle, uniform(4)) == 1
        assert cost(single_edge, uniform(2)) == Fraction(1, 2)
        assert cost(empty3, uniform(3)) == 0

    def test_potential_is_twice_cost_at_zero_coloring(self, uniform, zeros):
        graph = GeneratorOperator().generate('random_regular:30,4')
        assert (potential_M(graph, uniform(30), zeros(30))
                == 2 * cost(graph, uniform(30)))

    def test_monochrome_edges(self, four_cycle, zeros):
        assert monochrome_edges(four_cycle, zeros(4)) == 4
        assert monochrome_edges(four_cycle, ALTERNATING) == 0


class TestUnfriendly:

    def test_alternating(self, four_cycle):
        assert is_unfriendly(four_cycle, ALTERNATING) == (True, ())

    def test_all_zero(self, four_cycle, zeros):
        assert is_unfriendly(four_cycle, zeros(4)) == (False, (0, 1, 2, 3))

    def test_star_leaf_matches_centre(self, star):
        assert is_unfriendly(star, Coloring([0, 1, 1, 0])) == (False, (3,))


class TestRun:

    def test_four_cycle(self, four_cycle, uniform):
        trace = run(four_cycle, uniform(4), greedy_schedule(four_cycle))

        assert trace.converged
        assert trace.final_coloring == ALTERNATING
        assert trace.total_flips == 2
        assert len(trace.rounds) <= 2 * trace.period + 1
        assert trace.rounds[0].flipped == (0, 2)
        assert trace.rounds[0].flipped_mass == Fraction(1, 2)
        assert trace.potential_initial == 2
        assert trace.potential_final == 0

    def test_empty_graph(self, empty3, zeros):
        trace = DynamicsOperator(empty3).run()
        assert trace.converged
        assert trace.total_flips == 0
        assert trace.final_coloring == zeros(3)

    def test_no_vertices(self):
        trace = DynamicsOperator(validate_graph(0, [])).run()
        assert trace.status is RunStatus.CONVERGED
        assert trace.rounds == ()

    def test_random_regular_flip_bound(self):
        graph = GeneratorOperator().generate('random_regular:100,3')
        trace = DynamicsOperator(graph).run()
        assert trace.converged
        assert trace.total_flips <= graph.edge_count == 150
        assert is_unfriendly(graph, trace.final_coloring)[0]

    def test_unfriendly_start_is_quiet(self, four_cycle):
        trace = DynamicsOperator(four_cycle).run(initial=ALTERNATING)
        assert trace.converged
        assert trace.total_flips == 0
        assert len(trace.rounds) == trace.period

    @pytest.mark.parametrize('spec', [
        'torus:9,7',
        'random_regular:80,5',
        'erdos_renyi_capped:120,4,7',
        'regular_tree_truncation:3,4',
    ])
    def test_engines_agree(self, spec):
        graph = GeneratorOperator().generate(spec)
        start = Coloring(np.random.default_rng(5).integers(
            0, 2, graph.vertex_count))
        schedule = singleton_schedule(graph,
                                      seeded_order(graph.vertex_count, 2))

        fast = DynamicsOperator(graph, schedule=schedule).run(initial=start)
        slow = DynamicsOperator(graph, schedule=schedule,
                                engine='naive').run(initial=start)

        assert fast.rounds == slow.rounds
        assert fast.final_coloring == slow.final_coloring

    def test_engines_agree_on_ball_measure(self):
        grid = GeneratorOperator().generate('grid:8,8')
        sub, measure, _ = restrict_ball_measure(
            grid, ball_measure(grid, 27, Fraction(1, 4)))

        fast = run(sub, measure, greedy_schedule(sub))
        slow = run(sub, measure, greedy_schedule(sub), engine='naive')

        assert fast.rounds == slow.rounds
        for record in fast.rounds:
            assert record.flipped_mass == measure.mass(record.flipped)

    def test_round_budget_exceeded(self, four_cycle):
        trace = DynamicsOperator(four_cycle).run(max_rounds=1)
        assert trace.status is RunStatus.MAX_ROUNDS_EXCEEDED
        assert len(trace.rounds) == 1

    def test_default_budget(self, four_cycle):
        assert default_max_rounds(four_cycle, greedy_schedule(four_cycle)) == 10

    def test_frozen_schedule_needs_budget(self, path5):
        schedule = frozen_boundary_schedule(path5, [0, 4])
        with pytest.raises(ScheduleError):
            DynamicsOperator(path5, schedule=schedule).run()

        trace = DynamicsOperator(path5, schedule=schedule).run(max_rounds=50)
        assert trace.mode == 'frozen'
        assert trace.flip_counts()[[0, 4]].tolist() == [0, 0]

    def test_measure_size_mismatch(self, four_cycle):
        with pytest.raises(FlipError):
            DynamicsOperator(four_cycle, measure=VertexMeasure.uniform(3))

    def test_unknown_engine(self, four_cycle):
        with pytest.raises(FlipError):
            DynamicsOperator(four_cycle, engine='parallel')

    def test_reproducible(self):
        graph = GeneratorOperator().generate('random_regular:200,4')
        assert DynamicsOperator(graph).run() == DynamicsOperator(graph).run()
