import argparse
import sys

import core.logger.log as log
from core.exceptions import FlipError, VerificationError
from core.operators.dynamics import is_unfriendly, potential_M
from core.operators.experiment import ExperimentOperator
from core.operators.files import STDIO, FileOperator
from core.operators.graph import cocycle_bound_ok, edgewise_ratio_range
from core.operators.measures import growth_profile, log_slopes
from core.operators.oracle import OracleOperator
from core.queries.claims import (
    ClaimVerifier,
    variant_for,
    verify_flip_counts,
    verify_replayed_potentials,
    verify_telescoping,
    verify_unweighted_bound,
)
from core.schema.experiment import (
    VERIFICATIONS,
    ExperimentConfig,
    GeneratorSpec,
    MeasureSource,
)
from core.schema.trace import RunStatus, RunTrace
from settings.config import DEFAULT_SEED


logger = log.setup_custom_logger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2


def graph_source(args):
    """The --graph file or the --gen spec seeded with --seed."""
    if args.gen:
        return GeneratorSpec.parse(args.gen, seed=args.seed)
    return args.graph


def verification_list(text):
    toggles = tuple(t.strip() for t in text.split(',') if t.strip())
    unknown = set(toggles) - set(VERIFICATIONS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f'unknown verifications {sorted(unknown)}; choose from '
            f'{",".join(VERIFICATIONS)}')
    return toggles


def add_graph_arguments(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--graph', metavar='FILE',
                        help='graph file: "n m" then m lines "u v"')
    source.add_argument('--gen', metavar='FAMILY:PARAMS',
                        help='generator, e.g. torus:32,32 or '
                             'random_regular:100,3')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help='generator / permutation seed')


def cmd_generate(args, operator):
    graph = operator.load_graph(GeneratorSpec.parse(args.gen, seed=args.seed))
    operator.files.write_graph(graph, args.out)
    return EXIT_OK


def cmd_run(args, operator):
    config = ExperimentConfig(
        graph=graph_source(args),
        measure=MeasureSource.parse(args.measure),
        schedule=args.schedule,
        initial=args.c0,
        max_rounds=args.max_rounds,
        verify=args.verify,
        engine=args.engine,
        seed=args.seed,
        trace_path=args.trace,
        summary_path=args.summary,
        schedule_path=args.schedule_out,
    )
    report = operator.run_experiment(config)
    operator.files.write_json(report.to_dict(), args.report)
    return EXIT_OK


def cmd_verify(args, operator):
    files = operator.files
    full = operator.load_graph(graph_source(args))
    graph, measure, mapping = operator.load_measure(
        full, MeasureSource.parse(args.measure))

    ok, edge = cocycle_bound_ok(graph, measure)
    ratios = edgewise_ratio_range(graph, measure)
    document = {
        'cocycle_bound': {'ok': ok, 'first_violation': edge},
        'cocycle_range': [str(r) for r in ratios] if ratios else None,
    }

    if args.coloring:
        coloring = operator.load_initial(args.coloring, full.vertex_count,
                                         mapping)
        unfriendly, violators = is_unfriendly(graph, coloring)
        document['coloring'] = {'unfriendly': unfriendly,
                                'violators': list(violators)}
        if not unfriendly:
            raise VerificationError(
                f'Coloring is not unfriendly at {len(violators)} vertices',
                values={'first_violator': violators[0]},
            )

    if args.trace:
        records = tuple(files.read_trace(args.trace))
        initial = operator.load_initial(args.c0, full.vertex_count, mapping)
        final = initial
        for record in records:
            final = final.flipped(record.flipped)

        unfriendly, _ = is_unfriendly(graph, final)
        trace = RunTrace(
            rounds=records,
            initial_coloring=initial,
            final_coloring=final,
            status=(RunStatus.CONVERGED if unfriendly
                    else RunStatus.MAX_ROUNDS_EXCEEDED),
            total_flips=sum(len(r.flipped) for r in records),
            period=max((r.class_index for r in records), default=-1) + 1,
        )

        if not verify_replayed_potentials(trace, graph, measure):
            raise VerificationError('Trace values do not match the replayed '
                                    'colorings')

        variant = variant_for(measure)
        verifier = ClaimVerifier(graph, measure, variant)
        for record in records:
            verifier.require(record)

        checks = {
            'telescope': verify_telescoping(trace, graph, measure, variant),
            'unweighted_bound': verify_unweighted_bound(trace, graph),
            'flip_counts': verify_flip_counts(trace, measure),
        }
        failed = sorted(name for name, passed in checks.items() if not passed)
        if failed:
            raise VerificationError(f'Trace checks failed: {failed}')

        document['trace'] = {
            'rounds': len(records),
            'claim_variant': variant,
            'checks': checks,
            'potential_final': str(potential_M(graph, measure, final)),
            'final_unfriendly': unfriendly,
        }

    files.write_json(document, args.report)
    return EXIT_OK


def cmd_oracle(args, operator):
    graph = operator.load_graph(graph_source(args))
    oracle = operator.oracle

    enumeration = oracle.enumerate(graph)
    coloring, fewest = oracle.min_monochrome_coloring(graph)

    if args.table:
        operator.files.write_rows(
            args.table,
            ('code', 'colors', 'unfriendly', 'fixed_point', 'local_max_cut',
             'cut'),
            enumeration.rows(),
        )

    operator.files.write_json({
        'vertices': graph.vertex_count,
        'edges': graph.edge_count,
        'colorings': enumeration.size,
        'unfriendly': enumeration.unfriendly_count,
        'fixed_points': int(enumeration.fixed_point.sum()),
        'local_max_cuts': int(enumeration.local_max_cut.sum()),
        'equivalent': enumeration.flags_agree,
        'min_monochrome': fewest,
        'min_monochrome_coloring': coloring.to_list(),
    }, args.report)

    if not enumeration.flags_agree:
        raise VerificationError('Unfriendly, fixed point and local max cut '
                                'sets differ')
    return EXIT_OK


def cmd_growth(args, operator):
    graph = operator.load_graph(graph_source(args))
    profile = growth_profile(graph, args.center, args.radius)

    operator.files.write_rows(args.out, ('r', 'ball_size'),
                              enumerate(profile))
    if args.report:
        summary = log_slopes(profile)
        operator.files.write_json({'center': args.center, 'profile': profile,
                                   **summary}, args.report)
    return EXIT_OK


def cmd_boundary(args, operator):
    graph = operator.load_graph(graph_source(args))
    report, trace = operator.boundary_experiment(
        graph, args.center, args.inner, args.outer, args.max_rounds,
        initial=args.c0, seed=args.seed)

    if args.out:
        operator.files.write_rows(
            args.out, ('distance', 'vertices', 'flips', 'max_flips'),
            ((p['distance'], p['vertices'], p['flips'], p['max_flips'])
             for p in report.profile))
    if args.trace:
        operator.files.write_trace(trace, args.trace)

    operator.files.write_json(report.to_dict(), args.report)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog='flip',
        description='Flip-sequence dynamics for unfriendly 2-colorings, '
                    'checked in exact arithmetic.',
    )
    parser.add_argument('--log-level', default=None,
                        help='override [LOGGING] LEVEL from settings/envs.cfg')
    commands = parser.add_subparsers(dest='command', required=True)

    generate = commands.add_parser('generate', help='write a generated graph')
    generate.add_argument('--gen', required=True, metavar='FAMILY:PARAMS')
    generate.add_argument('--seed', type=int, default=DEFAULT_SEED)
    generate.add_argument('--out', default=STDIO)
    generate.set_defaults(handler=cmd_generate)

    run = commands.add_parser('run', help='run and verify the flip sequence')
    add_graph_arguments(run)
    run.add_argument('--measure', default='uniform',
                     help='uniform | FILE | ball:CENTER:EPS (EPS may be auto)')
    run.add_argument('--schedule', default='greedy',
                     help='greedy | singleton | singleton:random | '
                          'singleton:FILE | file:FILE')
    run.add_argument('--c0', default='zeros', help='zeros | FILE')
    run.add_argument('--max-rounds', type=int, default=None)
    run.add_argument('--verify', type=verification_list,
                     default=('claims', 'telescope', 'unfriendly'),
                     help=f'comma list from {",".join(VERIFICATIONS)}')
    run.add_argument('--engine', choices=('incremental', 'naive'),
                     default='incremental')
    run.add_argument('--trace', metavar='FILE')
    run.add_argument('--summary', metavar='FILE')
    run.add_argument('--schedule-out', metavar='FILE',
                     help='write the schedule the run used')
    run.add_argument('--report', default=STDIO)
    run.set_defaults(handler=cmd_run)

    verify = commands.add_parser('verify',
                                 help='check a measure, coloring or trace')
    add_graph_arguments(verify)
    verify.add_argument('--measure', default='uniform')
    verify.add_argument('--coloring', metavar='FILE')
    verify.add_argument('--trace', metavar='FILE')
    verify.add_argument('--c0', default='zeros',
                        help='initial coloring the trace started from')
    verify.add_argument('--report', default=STDIO)
    verify.set_defaults(handler=cmd_verify)

    oracle = commands.add_parser('oracle', help='exhaustive small-graph check')
    add_graph_arguments(oracle)
    oracle.add_argument('--table', metavar='FILE',
                        help='write the full flag table as CSV')
    oracle.add_argument('--report', default=STDIO)
    oracle.set_defaults(handler=cmd_oracle)

    growth = commands.add_parser('growth', help='ball sizes around a vertex')
    add_graph_arguments(growth)
    growth.add_argument('--center', type=int, required=True)
    growth.add_argument('--radius', type=int, required=True)
    growth.add_argument('--out', default=STDIO)
    growth.add_argument('--report', metavar='FILE',
                        help='JSON with the log-slope summary')
    growth.set_defaults(handler=cmd_growth)

    boundary = commands.add_parser(
        'boundary', help='frozen-boundary truncation experiment')
    add_graph_arguments(boundary)
    boundary.add_argument('--center', type=int, required=True)
    boundary.add_argument('--inner', type=int, required=True)
    boundary.add_argument('--outer', type=int, required=True)
    boundary.add_argument('--max-rounds', type=int, required=True)
    boundary.add_argument('--c0', choices=('zeros', 'random'),
                          default='zeros')
    boundary.add_argument('--out', metavar='FILE',
                          help='per-distance flip counts as CSV')
    boundary.add_argument('--trace', metavar='FILE')
    boundary.add_argument('--report', default=STDIO)
    boundary.set_defaults(handler=cmd_boundary)

    return parser


def main(argv=None):

    args = build_parser().parse_args(argv)
    if args.log_level:
        log.set_level(args.log_level)

    operator = ExperimentOperator(files=FileOperator(),
                                  oracle=OracleOperator())

    try:
        return args.handler(args, operator)

    except VerificationError as e:
        logger.error(f'Verification failed: {e}')
        FileOperator().write_json({'violation': e.as_dict()}, STDIO)
        return EXIT_VERIFICATION

    except FlipError as e:
        logger.error(f'Usage error: {e}')
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
