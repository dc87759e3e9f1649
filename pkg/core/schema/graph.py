from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core.exceptions import GraphError


def _frozen_array(values, dtype):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteGraph:
    """
    Undirected simple graph on the vertices 0..vertex_count-1 in compressed
    adjacency form: the neighbours of x are indices[indptr[x]:indptr[x+1]],
    sorted ascending. Build instances with core.operators.graph.validate_graph,
    which symmetrizes and deduplicates raw edge lists.
    """

    vertex_count: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'indptr', _frozen_array(self.indptr, np.int64))
        object.__setattr__(self, 'indices', _frozen_array(self.indices, np.int64))

        if self.vertex_count < 0:
            raise GraphError(f'Negative vertex count: {self.vertex_count}')
        if len(self.indptr) != self.vertex_count + 1:
            raise GraphError('indptr must have vertex_count + 1 entries')
        if self.indptr[-1] != len(self.indices):
            raise GraphError('indptr does not match the neighbour array')

    @cached_property
    def degrees(self):
        degrees = np.diff(self.indptr)
        degrees.setflags(write=False)
        return degrees

    @cached_property
    def owners(self):
        # owners[k] is the vertex whose adjacency row holds indices[k]
        owners = np.repeat(np.arange(self.vertex_count, dtype=np.int64),
                           self.degrees)
        owners.setflags(write=False)
        return owners

    @cached_property
    def adjacency(self):
        flat = self.indices.tolist()
        bounds = self.indptr.tolist()
        return tuple(
            tuple(flat[bounds[x]:bounds[x + 1]])
            for x in range(self.vertex_count)
        )

    @cached_property
    def max_degree(self):
        if self.vertex_count == 0:
            return 0
        return int(self.degrees.max())

    @property
    def edge_count(self):
        return len(self.indices) // 2

    def degree(self, x):
        self.check_vertex(x)
        return int(self.degrees[x])

    def neighbors(self, x):
        self.check_vertex(x)
        return self.adjacency[x]

    def edges(self):
        """Yields every edge once as (u, v) with u < v, in sorted order."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if u < v:
                    yield u, v

    def edge_array(self):
        """All edges as an (m, 2) array with u < v, sorted."""
        mask = self.owners < self.indices
        return np.stack([self.owners[mask], self.indices[mask]], axis=1)

    def check_vertex(self, x):
        if not 0 <= x < self.vertex_count:
            raise GraphError(
                f'Vertex {x} out of range [0, {self.vertex_count})'
            )

    def is_independent(self, vertices):
        """
        Returns the first edge (u, v) with both endpoints in vertices, or
        None when the set is independent.
        """
        members = np.zeros(self.vertex_count, dtype=bool)
        members[np.asarray(list(vertices), dtype=np.int64)] = True

        inside = members[self.owners] & members[self.indices]
        if not inside.any():
            return None

        k = int(np.argmax(inside))
        return int(self.owners[k]), int(self.indices[k])

    def __eq__(self, other):
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.vertex_count, self.indices.tobytes()))

    def __repr__(self):
        return (f'FiniteGraph(n={self.vertex_count}, m={self.edge_count}, '
                f'd={self.max_degree})')


@dataclass(frozen=True, eq=False)
class Coloring:
    """A total map from the vertices to {0, 1}. Immutable; use flipped()."""

    colors: np.ndarray

    def __post_init__(self):
        colors = _frozen_array(self.colors, np.uint8)
        if colors.ndim != 1:
            raise GraphError('A coloring is a flat sequence of colors')
        if colors.size and colors.max() > 1:
            raise GraphError('Colors must be 0 or 1')
        object.__setattr__(self, 'colors', colors)

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_code(cls, code, n):
        """Vertex x gets bit x of the integer code."""
        bits = (code >> np.arange(n, dtype=np.int64)) & 1 if n else []
        return cls(np.asarray(bits, dtype=np.uint8))

    @property
    def code(self):
        return sum(int(c) << x for x, c in enumerate(self.colors.tolist()))

    def flipped(self, vertices):
        colors = self.colors.copy()
        index = np.asarray(list(vertices), dtype=np.int64)
        if index.size and (index.min() < 0 or index.max() >= len(colors)):
            raise GraphError(f'Cannot flip vertices outside [0, {len(colors)})')
        colors[index] ^= 1
        return Coloring(colors)

    def to_list(self):
        return self.colors.tolist()

    def __len__(self):
        return len(self.colors)

    def __getitem__(self, x):
        return int(self.colors[x])

    def __iter__(self):
        return iter(self.colors.tolist())

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return np.array_equal(self.colors, other.colors)

    def __hash__(self):
        return hash(self.colors.tobytes())

    def __repr__(self):
        if len(self) <= 32:
            return f'Coloring({self.to_list()})'
        return f'Coloring(n={len(self)}, ones={int(self.colors.sum())})'
