import numpy as np

import core.logger.log as log
from core.exceptions import FlipError, ScheduleError, VerificationError
from core.operators.dynamics import (
    DynamicsOperator,
    cost,
    is_unfriendly,
    monochrome_edges,
    potential_M,
)
from core.operators.files import FileOperator
from core.operators.generator import GeneratorOperator
from core.operators.graph import distance_array, induced_subgraph
from core.operators.measures import (
    ball_measure,
    epsilon_for_graph,
    restrict_ball_measure,
)
from core.operators.oracle import OracleOperator
from core.operators.schedule import (
    build_schedule,
    frozen_boundary_schedule,
    greedy_schedule,
    seeded_order,
    singleton_schedule,
)
from core.queries.claims import (
    ClaimVerifier,
    telescoping_budget,
    variant_for,
    verify_edge_counting,
    verify_flip_counts,
    verify_partition_bound,
    verify_symmetric_difference,
    verify_telescoping,
    verify_unweighted_bound,
)
from core.schema.experiment import (
    BoundaryReport,
    ExperimentReport,
    GeneratorSpec,
    MeasureKind,
)
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure

logger = log.setup_custom_logger(__name__)


class ExperimentOperator:
    """
    Ties the engines together: loads or generates the graph, builds the
    measure and schedule, runs the flip sequence and applies the enabled
    verifiers. Any failed check aborts with a VerificationError naming the
    round and the exact values.
    """

    def __init__(self, files=None, generator=None, oracle=None):

        self.files = files or FileOperator()
        self.generator = generator or GeneratorOperator()
        self.oracle = oracle or OracleOperator()

    def load_graph(self, source):
        if isinstance(source, GeneratorSpec):
            return self.generator.generate(source)
        return self.files.read_graph(source)

    def load_measure(self, graph, source):
        """
        Returns:
            (FiniteGraph, VertexMeasure, tuple | None): the graph the run
            uses (a component for ball measures on disconnected graphs),
            its measure, and the original ids when restricted.
        """
        if source.kind is MeasureKind.UNIFORM:
            return graph, VertexMeasure.uniform(graph.vertex_count), None

        if source.kind is MeasureKind.FILE:
            measure = self.files.read_measure(source.path, graph.vertex_count)
            return graph, measure, None

        epsilon = source.epsilon
        if epsilon is None:
            epsilon = epsilon_for_graph(graph)
        ball = ball_measure(graph, source.center, epsilon)
        sub, measure, mapping = restrict_ball_measure(graph, ball)

        if ball.spans_graph:
            return graph, measure, None

        logger.warning(f'Run restricted to the component of vertex '
                       f'{source.center} ({sub.vertex_count} vertices)')
        return sub, measure, mapping

    def load_schedule(self, graph, kind, seed, mapping=None):
        """
        Builds the named schedule. A 'file:PATH' schedule is written in the
        ids of the loaded graph and is translated when the run is restricted
        to a component.
        """
        if kind == 'greedy':
            return greedy_schedule(graph)
        if kind == 'singleton':
            return singleton_schedule(graph, range(graph.vertex_count))
        if kind == 'singleton:random':
            return singleton_schedule(graph,
                                      seeded_order(graph.vertex_count, seed))
        if kind.startswith('singleton:'):
            order = self.files.read_order(kind.partition(':')[2])
            return singleton_schedule(graph, order)
        if kind.startswith('file:'):
            return self._schedule_from_file(graph, kind.partition(':')[2],
                                            mapping)

        raise FlipError(f'Unknown schedule {kind!r}')

    def _schedule_from_file(self, graph, path, mapping):
        schedule = self.files.read_schedule(path)
        classes, frozen = schedule.classes, schedule.frozen

        if mapping is not None:
            position = {v: i for i, v in enumerate(mapping)}
            try:
                classes = [tuple(position[x] for x in members)
                           for members in classes]
                frozen = tuple(position[x] for x in frozen)
            except KeyError as e:
                raise ScheduleError(
                    f'Schedule vertex {e.args[0]} lies outside the component '
                    f'the run is restricted to'
                ) from e

        return build_schedule(graph, classes, schedule.mode, frozen)

    def load_initial(self, source, vertex_count, mapping=None):
        if source == 'zeros':
            coloring = Coloring.zeros(vertex_count)
        else:
            coloring = self.files.read_coloring(source, vertex_count)

        if mapping is not None:
            coloring = Coloring(coloring.colors[list(mapping)])
        return coloring

    def verify_rounds(self, graph, measure, trace, variant):
        """
        Per-round checks: the potential-drop claim, the unweighted bound,
        the symmetric-difference identity and the r/s partition bound.
        """
        verifier = ClaimVerifier(graph, measure, variant)

        if not verify_edge_counting(graph, measure):
            raise VerificationError('An edge is counted outside (2 - eps, '
                                    '2 + eps) times its endpoint mass')

        for record, before, after in trace.replay():
            verifier.require(record)

            if not verify_symmetric_difference(graph, before, after,
                                               record.flipped):
                raise VerificationError(
                    f'Monochromatic subgraph mismatch in round {record.index}',
                    round_index=record.index,
                )

            if not verify_partition_bound(graph, measure, record, before,
                                          after):
                raise VerificationError(
                    f'Partition bound fails in round {record.index}',
                    round_index=record.index,
                    values={'drop': record.drop,
                            'flipped_mass': record.flipped_mass},
                )

        if not verify_unweighted_bound(trace, graph):
            raise VerificationError(
                'Monochromatic edge count dropped by less than |B_n|',
                values={'total_flips': trace.total_flips,
                        'edges': graph.edge_count},
            )

        if not verify_flip_counts(trace, measure):
            raise VerificationError('A vertex flipped more than M(G_0)/mu(x) '
                                    'times')

        return len(trace.rounds)

    def run_experiment(self, config):
        """
        Executes one configured run with its verifiers and writes the
        optional trace and summary files.

        Args:
            config (ExperimentConfig):
                The experiment to run.

        Returns:
            ExperimentReport

        Raises:
            VerificationError: a verifier failed.
        """
        full = self.load_graph(config.graph)
        graph, measure, mapping = self.load_measure(full, config.measure)
        config.check_oracle_size(graph.vertex_count)

        schedule = self.load_schedule(graph, config.schedule, config.seed,
                                      mapping)
        initial = self.load_initial(config.initial, full.vertex_count, mapping)

        variant = variant_for(measure)
        operator = DynamicsOperator(graph, measure, schedule, config.engine)
        trace = operator.run(initial=initial, max_rounds=config.max_rounds)

        checks = {}

        if 'claims' in config.verify:
            rounds = self.verify_rounds(graph, measure, trace, variant)
            checks['claims'] = f'passed ({variant}, {rounds} rounds)'

        if 'telescope' in config.verify:
            if not verify_telescoping(trace, graph, measure, variant):
                raise VerificationError(
                    'Summed flipped mass exceeds its budget',
                    values={'flipped_mass_total': trace.flipped_mass_total,
                            'budget': telescoping_budget(trace, graph,
                                                         measure, variant),
                            'variant': variant},
                )
            checks['telescope'] = 'passed'

        if 'unfriendly' in config.verify:
            checks['unfriendly'] = self._check_unfriendly(graph, trace)

        if 'oracle' in config.verify:
            checks['oracle'] = self._check_oracle(graph, trace)

        if config.trace_path:
            self.files.write_trace(trace, config.trace_path)
        if config.summary_path:
            self.files.write_summary(trace, config.summary_path)
        if config.schedule_path:
            # written in the ids of the loaded graph, as file: schedules are read
            self.files.write_schedule(
                schedule if mapping is None else schedule.relabelled(mapping),
                config.schedule_path)

        source = config.graph
        report = ExperimentReport(
            graph={
                'source': (source.label() if isinstance(source, GeneratorSpec)
                           else source),
                'seed': getattr(source, 'seed', None),
                'vertices': graph.vertex_count,
                'edges': graph.edge_count,
                'max_degree': graph.max_degree,
            },
            measure=config.measure.label(),
            schedule={'kind': config.schedule, 'period': schedule.period,
                      'mode': schedule.mode.value},
            claim_variant=variant,
            status=trace.status.value,
            converged=trace.converged,
            rounds=len(trace.rounds),
            total_flips=trace.total_flips,
            flipped_mass_total=trace.flipped_mass_total,
            potential_initial=potential_M(graph, measure,
                                          trace.initial_coloring),
            potential_final=potential_M(graph, measure, trace.final_coloring),
            cost=cost(graph, measure),
            checks=checks,
        )
        logger.info(f'Experiment finished: {report.status}, '
                    f'{report.total_flips} flips, checks {sorted(checks)}')

        return report

    def _check_unfriendly(self, graph, trace):
        if not trace.converged:
            return 'skipped (run did not converge)'

        # recomputed from the final coloring, not from engine counters
        ok, violators = is_unfriendly(graph, trace.final_coloring)
        if not ok:
            raise VerificationError(
                f'Converged coloring is not unfriendly at {len(violators)} '
                'vertices',
                values={'first_violator': violators[0]},
            )
        return 'passed (recomputed from scratch)'

    def _check_oracle(self, graph, trace):
        enumeration = self.oracle.enumerate(graph)
        if not enumeration.flags_agree:
            raise VerificationError('Oracle flags disagree: unfriendly, fixed '
                                    'point and local max cut sets differ')

        final = trace.final_coloring
        if trace.converged and not enumeration.unfriendly[final.code]:
            raise VerificationError('Oracle rejects the converged coloring')

        _, fewest = self.oracle.min_monochrome_coloring(graph)
        reached = monochrome_edges(graph, final)
        if trace.converged and reached < fewest:
            raise VerificationError(
                'Engine beat the exhaustive minimum',
                values={'engine': reached, 'oracle': fewest},
            )

        return (f'passed ({enumeration.unfriendly_count} unfriendly of '
                f'{enumeration.size}; monochrome {reached} vs minimum '
                f'{fewest})')

    def boundary_experiment(self, graph, center, inner_radius, outer_radius,
                            max_rounds, initial='zeros', seed=0):
        """
        Runs the flip sequence on the ball B(center, outer_radius) with its
        outermost sphere frozen, then reports flips by distance from the
        centre and whether B(center, inner_radius) stopped changing. An
        emulation of a finite window into an infinite graph; nothing here
        is a theorem check.

        Returns:
            (BoundaryReport, RunTrace)
        """
        if not 0 <= inner_radius < outer_radius:
            raise FlipError(f'Need 0 <= r < R, got r={inner_radius}, '
                            f'R={outer_radius}')

        distances = distance_array(graph, center)
        inside = np.flatnonzero((distances >= 0) & (distances <= outer_radius))
        ball, mapping = induced_subgraph(graph, inside)
        radii = distances[np.asarray(mapping, dtype=np.int64)]

        frozen = np.flatnonzero(radii == outer_radius).tolist()
        schedule = frozen_boundary_schedule(ball, frozen)

        if initial == 'random':
            rng = GeneratorOperator.create_rng(seed)
            start = Coloring(rng.integers(0, 2, size=ball.vertex_count))
        else:
            start = Coloring.zeros(ball.vertex_count)

        logger.warning('Frozen-boundary run: repetitiveness fails on the '
                       'frozen shell; results are empirical')
        trace = DynamicsOperator(ball, schedule=schedule).run(
            initial=start, max_rounds=max_rounds)

        counts = trace.flip_counts()
        profile = []
        for r in range(outer_radius + 1):
            at = radii == r
            profile.append({
                'distance': r,
                'vertices': int(at.sum()),
                'flips': int(counts[at].sum()),
                'max_flips': int(counts[at].max()) if at.any() else 0,
            })

        interior = np.zeros(ball.vertex_count, dtype=bool)
        interior[radii <= inner_radius] = True
        last_interior_flip = -1
        for record in trace.rounds:
            if record.flipped and interior[list(record.flipped)].any():
                last_interior_flip = record.index

        quiet_window = len(trace.rounds) - schedule.period
        report = BoundaryReport(
            center=center,
            inner_radius=inner_radius,
            outer_radius=outer_radius,
            vertices=ball.vertex_count,
            frozen=len(frozen),
            status=trace.status.value,
            rounds=len(trace.rounds),
            interior_stable=(trace.converged
                             or last_interior_flip < quiet_window),
            last_interior_flip=last_interior_flip,
            profile=profile,
        )
        logger.info(f'Boundary experiment: interior stable '
                    f'{report.interior_stable}, {trace.status.value}')

        return report, trace


def run_experiment(config):
    return ExperimentOperator().run_experiment(config)


def boundary_experiment(graph, center, inner_radius, outer_radius, max_rounds,
                        **kwargs):
    return ExperimentOperator().boundary_experiment(
        graph, center, inner_radius, outer_radius, max_rounds, **kwargs)
