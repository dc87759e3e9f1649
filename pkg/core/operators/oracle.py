from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

import core.logger.log as log
import core.operators.dynamics as dynamics
from core.exceptions import OracleError
from core.schema.graph import Coloring
from settings.config import (
    ORACLE_CHUNK_BITS,
    ORACLE_MAX_VERTICES,
    ORACLE_WORKERS,
)

logger = log.setup_custom_logger(__name__)


@dataclass(frozen=True, eq=False)
class ColoringEnumeration:
    """
    Flags for every coloring of a small graph, indexed by its integer code
    (bit x holds the color of vertex x).
    """

    graph: object
    unfriendly: np.ndarray
    fixed_point: np.ndarray
    local_max_cut: np.ndarray
    cut_sizes: np.ndarray

    @property
    def size(self):
        return len(self.unfriendly)

    @property
    def unfriendly_count(self):
        return int(self.unfriendly.sum())

    @property
    def flags_agree(self):
        return bool(np.array_equal(self.unfriendly, self.fixed_point)
                    and np.array_equal(self.unfriendly, self.local_max_cut))

    def unfriendly_codes(self):
        return np.flatnonzero(self.unfriendly).tolist()

    def coloring(self, code):
        return Coloring.from_code(code, self.graph.vertex_count)

    def rows(self):
        """(code, colors, unfriendly, fixed_point, local_max_cut, cut) rows."""
        n = self.graph.vertex_count
        for code in range(self.size):
            colors = ''.join(str((code >> x) & 1) for x in range(n))
            yield (code, colors, int(self.unfriendly[code]),
                   int(self.fixed_point[code]),
                   int(self.local_max_cut[code]), int(self.cut_sizes[code]))


class OracleOperator:
    """
    Exhaustive ground truth over all 2^n colorings of a graph with at most
    ORACLE_MAX_VERTICES vertices. Coloring codes are split into chunks
    of 2^chunk_bits evaluated on a thread pool; chunk results are merged
    in code order, so the output does not depend on scheduling.
    """

    def __init__(self, max_vertices=ORACLE_MAX_VERTICES,
                 chunk_bits=ORACLE_CHUNK_BITS, workers=ORACLE_WORKERS):

        self.max_vertices = max_vertices
        self.chunk_bits = chunk_bits
        self.workers = workers

    def create_executor(self):
        """
        Creates the thread pool the chunks run on; numpy releases the GIL
        inside the vectorized kernels.

        Returns:
            concurrent.futures.ThreadPoolExecutor
        """
        return ThreadPoolExecutor(max_workers=max(1, self.workers))

    def _map_chunks(self, task, chunks):
        if len(chunks) == 1:
            return [task(chunks[0])]

        with self.create_executor() as executor:
            return list(executor.map(task, chunks))

    def _check_size(self, graph):
        if graph.vertex_count > self.max_vertices:
            raise OracleError(
                f'Oracle limited to {self.max_vertices} vertices, graph has '
                f'{graph.vertex_count}'
            )

    def _chunks(self, total):
        step = 1 << self.chunk_bits
        return [(start, min(start + step, total))
                for start in range(0, total, step)]

    @staticmethod
    def _decode(n, start, stop):
        # one row of vertex colors per code in [start, stop)
        codes = np.arange(start, stop, dtype=np.int64)
        return ((codes[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(
            np.uint8)

    @classmethod
    def _chunk_counts(cls, graph, edges, start, stop):
        # same/diff neighbour counts and cut size for codes in [start, stop)
        n = graph.vertex_count
        codes = np.arange(start, stop, dtype=np.int64)
        bits = cls._decode(n, start, stop)

        same = np.zeros((len(codes), n), dtype=np.int16)
        diff = np.zeros((len(codes), n), dtype=np.int16)
        cut = np.zeros(len(codes), dtype=np.int16)

        for u, v in edges:
            agree = bits[:, u] == bits[:, v]
            same[:, u] += agree
            same[:, v] += agree
            diff[:, u] += ~agree
            diff[:, v] += ~agree
            cut += ~agree

        return same, diff, cut

    def _chunk_flags(self, graph, edges, start, stop):
        same, diff, cut = self._chunk_counts(graph, edges, start, stop)
        unfriendly = (diff >= same).all(axis=1)

        # stability under the engine's own flip rule, counted from its CSR
        fixed_point = dynamics.fixed_points(
            graph, self._decode(graph.vertex_count, start, stop))

        return unfriendly, fixed_point, cut

    def enumerate(self, graph):
        """
        Evaluates unfriendliness, flip stability and local cut maximality
        for every coloring.

        Returns:
            ColoringEnumeration

        Raises:
            OracleError: graph too large.
        """
        self._check_size(graph)

        n = graph.vertex_count
        total = 1 << n
        edges = [tuple(e) for e in graph.edge_array().tolist()]

        parts = self._map_chunks(
            lambda bounds: self._chunk_flags(graph, edges, *bounds),
            self._chunks(total),
        )

        unfriendly = np.concatenate([p[0] for p in parts])
        fixed_point = np.concatenate([p[1] for p in parts])
        cut = np.concatenate([p[2] for p in parts])

        # a cut is locally maximal when no single move increases it
        codes = np.arange(total, dtype=np.int64)
        local_max = np.ones(total, dtype=bool)
        for x in range(n):
            local_max &= cut[codes ^ (1 << x)] <= cut

        enumeration = ColoringEnumeration(
            graph=graph,
            unfriendly=unfriendly,
            fixed_point=fixed_point,
            local_max_cut=local_max,
            cut_sizes=cut,
        )
        logger.debug(f'Enumerated {total} colorings of {graph!r}: '
                    f'{enumeration.unfriendly_count} unfriendly')

        return enumeration

    def check_fixed_point_equivalence(self, graph):
        """
        True iff unfriendly colorings, flip fixed points and locally maximal
        cuts are the same set of colorings.
        """
        return self.enumerate(graph).flags_agree

    def min_monochrome_coloring(self, graph):
        """
        A coloring with the fewest monochromatic edges (a maximum cut); the
        lowest code wins ties.

        Returns:
            (Coloring, int)
        """
        self._check_size(graph)

        n = graph.vertex_count
        edges = [tuple(e) for e in graph.edge_array().tolist()]

        cuts = self._map_chunks(
            lambda bounds: self._chunk_counts(graph, edges, *bounds)[2],
            self._chunks(1 << n),
        )

        cut = np.concatenate(cuts)
        code = int(np.argmax(cut))

        return Coloring.from_code(code, n), graph.edge_count - int(cut[code])


def enumerate_colorings(graph, **kwargs):
    return OracleOperator(**kwargs).enumerate(graph)


def check_fixed_point_equivalence(graph, **kwargs):
    return OracleOperator(**kwargs).check_fixed_point_equivalence(graph)


def min_monochrome_coloring(graph, **kwargs):
    return OracleOperator(**kwargs).min_monochrome_coloring(graph)
