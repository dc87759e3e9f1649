import contextlib
import csv
import json
import sys

import core.logger.log as log
from core.exceptions import FlipError, GraphError, ScheduleError
from core.operators.graph import validate_graph
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure, format_rational, parse_rational
from core.schema.schedule import Schedule, ScheduleMode
from core.schema.trace import RoundRecord
from settings.config import CSV_DIGITS

logger = log.setup_custom_logger(__name__)

STDIO = '-'

SUMMARY_COLUMNS = (
    'n',
    'class_index',
    'flips',
    'flipped_mass',
    'potential_before',
    'potential_after',
    'monochrome_before',
    'monochrome_after',
)


class FileOperator:
    """
    Reads and writes the flat-file formats. Every writer sorts its content
    and renders rationals in lowest terms, so equal inputs always produce
    byte-identical files. The path '-' stands for stdin / stdout.
    """

    def __init__(self, digits=CSV_DIGITS):

        self.digits = digits

    @contextlib.contextmanager
    def open_text(self, path, mode='r'):
        """
        Opens a text file with '\\n' line endings, or wraps stdin/stdout
        for '-'.
        """
        if path == STDIO:
            yield sys.stdout if 'w' in mode else sys.stdin
            return

        try:
            with open(path, mode, newline='\n' if 'w' in mode else None,
                      encoding='utf-8') as handle:
                yield handle
        except FileNotFoundError as e:
            raise FlipError(f'No such file: {path}') from e

    def _lines(self, path):
        with self.open_text(path) as handle:
            return [line.strip() for line in handle if line.strip()]

    def decimal(self, value):
        return f'{float(value):.{self.digits}g}'

    def read_graph(self, path):
        """
        Reads 'n m' followed by m lines 'u v'.

        Returns:
            FiniteGraph
        """
        lines = self._lines(path)
        if not lines:
            raise GraphError(f'Empty graph file: {path}')

        try:
            n, m = (int(t) for t in lines[0].split())
            edges = [tuple(int(t) for t in line.split()) for line in lines[1:]]
        except ValueError as e:
            raise GraphError(f'Malformed graph file {path}: {e}') from e

        if len(edges) != m or any(len(e) != 2 for e in edges):
            raise GraphError(f'{path} announces {m} edges, found {len(edges)}')

        graph = validate_graph(n, edges)
        logger.info(f'Read {graph!r} from {path}')

        return graph

    def write_graph(self, graph, path):
        with self.open_text(path, 'w') as handle:
            handle.write(f'{graph.vertex_count} {graph.edge_count}\n')
            handle.writelines(f'{u} {v}\n' for u, v in graph.edges())

        logger.info(f'Wrote {graph!r} to {path}')

    def read_measure(self, path, vertex_count=None):
        """
        Reads one 'numerator/denominator' per vertex.

        Returns:
            VertexMeasure
        """
        weights = [parse_rational(line) for line in self._lines(path)]
        if vertex_count is not None and len(weights) != vertex_count:
            raise FlipError(f'{path} holds {len(weights)} weights, graph has '
                            f'{vertex_count} vertices')

        return VertexMeasure.from_fractions(weights)

    def write_measure(self, measure, path):
        with self.open_text(path, 'w') as handle:
            handle.writelines(f'{format_rational(w)}\n'
                              for w in measure.weights())

    def read_coloring(self, path, vertex_count=None):
        """One color (0 or 1) per line."""
        try:
            colors = [int(line) for line in self._lines(path)]
        except ValueError as e:
            raise FlipError(f'Malformed coloring file {path}') from e
        if vertex_count is not None and len(colors) != vertex_count:
            raise FlipError(f'{path} colors {len(colors)} vertices, graph has '
                            f'{vertex_count}')
        if any(c not in (0, 1) for c in colors):
            raise FlipError(f'{path}: colors must be 0 or 1')

        return Coloring(colors)

    def write_coloring(self, coloring, path):
        with self.open_text(path, 'w') as handle:
            handle.writelines(f'{c}\n' for c in coloring)

    def read_order(self, path):
        """Whitespace-separated vertex ids."""
        try:
            return [int(t) for line in self._lines(path) for t in line.split()]
        except ValueError as e:
            raise ScheduleError(f'Malformed vertex order in {path}') from e

    def read_schedule(self, path):
        """
        Reads 'period k mode cyclic|frozen', then 'frozen ...' in frozen
        mode, then one line of vertex ids per class.
        """
        lines = self._lines(path)
        try:
            _, period, _, mode = lines[0].split()
            period = int(period)
            mode = ScheduleMode(mode)
        except (IndexError, ValueError) as e:
            raise ScheduleError(f'Malformed schedule header in {path}') from e

        body = lines[1:]
        frozen = ()
        if mode is ScheduleMode.FROZEN:
            if not body or not body[0].startswith('frozen'):
                raise ScheduleError(f'{path}: frozen mode needs a frozen line')
            frozen = tuple(int(t) for t in body[0].split()[1:])
            body = body[1:]

        classes = [tuple(int(t) for t in line.split()) for line in body]
        if len(classes) != period:
            raise ScheduleError(f'{path} announces {period} classes, found '
                                f'{len(classes)}')

        return Schedule(tuple(classes), mode, frozen)

    def write_schedule(self, schedule, path):
        with self.open_text(path, 'w') as handle:
            handle.write(f'period {schedule.period} mode '
                         f'{schedule.mode.value}\n')
            if schedule.mode is ScheduleMode.FROZEN:
                handle.write(' '.join(['frozen'] + [str(x) for x in
                                                    schedule.frozen]) + '\n')
            handle.writelines(' '.join(str(x) for x in members) + '\n'
                              for members in schedule.classes)

    def write_trace(self, trace, path):
        """One JSON object per round, exact rationals as strings."""
        with self.open_text(path, 'w') as handle:
            for record in trace.rounds:
                handle.write(json.dumps(record.to_dict(),
                                        separators=(',', ':')) + '\n')

        logger.info(f'Trace of {len(trace.rounds)} rounds written to {path}')

    def read_trace(self, path):
        """
        Returns:
            list of RoundRecord
        """
        try:
            return [RoundRecord.from_dict(json.loads(line))
                    for line in self._lines(path)]
        except (KeyError, ValueError) as e:
            raise FlipError(f'Malformed trace file {path}: {e}') from e

    def write_rows(self, path, header, rows):
        with self.open_text(path, 'w') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)

    def write_summary(self, trace, path):
        """Per-round CSV with decimal approximations for plotting."""
        rows = ((r.index, r.class_index, len(r.flipped),
                 self.decimal(r.flipped_mass),
                 self.decimal(r.potential_before),
                 self.decimal(r.potential_after),
                 r.monochrome_before, r.monochrome_after)
                for r in trace.rounds)
        self.write_rows(path, SUMMARY_COLUMNS, rows)

    def write_json(self, document, path):
        with self.open_text(path, 'w') as handle:
            handle.write(json.dumps(document, indent=2, sort_keys=True) + '\n')
