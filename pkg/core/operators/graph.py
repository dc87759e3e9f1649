from fractions import Fraction

import numpy as np

import core.logger.log as log
from core.exceptions import GraphError, MeasureError
from core.schema.graph import FiniteGraph

logger = log.setup_custom_logger(__name__)

UNREACHABLE = None


def validate_graph(vertex_count, edges):
    """
    Builds the canonical FiniteGraph from a raw undirected edge list. Edges
    are symmetrized and duplicates dropped; adjacency rows come out sorted.

    Args:
        vertex_count (int):
            Number of vertices n; ids live in [0, n).

        edges (iterable | numpy.ndarray):
            Unordered pairs (u, v) of vertex ids.

    Returns:
        FiniteGraph

    Raises:
        GraphError: on a self-loop or an id outside [0, n).
    """
    if vertex_count < 0:
        raise GraphError(f'Negative vertex count: {vertex_count}')

    if not isinstance(edges, np.ndarray):
        edges = list(edges)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)

    if edges.size:
        outside = ((edges < 0) | (edges >= vertex_count)).any(axis=1)
        if outside.any():
            u, v = edges[int(np.argmax(outside))].tolist()
            raise GraphError(
                f'Edge ({u}, {v}) has a vertex id outside [0, {vertex_count})'
            )

        loops = edges[:, 0] == edges[:, 1]
        if loops.any():
            u = int(edges[int(np.argmax(loops)), 0])
            raise GraphError(f'Self-loop at vertex {u}')

    if vertex_count == 0:
        return FiniteGraph(0, np.zeros(1, dtype=np.int64),
                           np.zeros(0, dtype=np.int64))

    both = np.concatenate([edges, edges[:, ::-1]])
    keys = np.unique(both[:, 0] * vertex_count + both[:, 1])
    owners, indices = np.divmod(keys, vertex_count)

    indptr = np.zeros(vertex_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(owners, minlength=vertex_count), out=indptr[1:])

    graph = FiniteGraph(vertex_count, indptr, indices)
    logger.debug(f'Validated {graph!r}')

    return graph


def gather_neighbors(graph, vertices):
    """
    Concatenated adjacency rows of the given vertices.

    Returns:
        (numpy.ndarray, numpy.ndarray): the row owner and the neighbour for
        every adjacency entry, in row order.
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    lengths = graph.degrees[vertices]
    total = int(lengths.sum())

    if total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty

    row_ends = np.cumsum(lengths)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(row_ends - lengths,
                                                           lengths)
    positions = np.repeat(graph.indptr[vertices], lengths) + offsets

    return np.repeat(vertices, lengths), graph.indices[positions]


def distance_array(graph, x):
    """Breadth-first distances from x as an int64 array, -1 if unreachable."""
    graph.check_vertex(x)

    distances = np.full(graph.vertex_count, -1, dtype=np.int64)
    distances[x] = 0
    frontier = np.array([x], dtype=np.int64)
    level = 0

    while frontier.size:
        _, reached = gather_neighbors(graph, frontier)
        reached = np.unique(reached)
        reached = reached[distances[reached] < 0]
        level += 1
        distances[reached] = level
        frontier = reached

    return distances


def graph_distance(graph, x):
    """
    Graph metric from x to every vertex.

    Returns:
        list: distance per vertex, UNREACHABLE (None) outside the component
        of x.
    """
    return [UNREACHABLE if d < 0 else d
            for d in distance_array(graph, x).tolist()]


def components(graph):
    """Component label per vertex, labels numbered by smallest member."""
    labels = np.full(graph.vertex_count, -1, dtype=np.int64)
    label = 0

    for x in range(graph.vertex_count):
        if labels[x] >= 0:
            continue
        if graph.degrees[x] == 0:
            labels[x] = label
        else:
            labels[distance_array(graph, x) >= 0] = label
        label += 1

    return labels


def induced_subgraph(graph, vertices):
    """
    Subgraph induced on vertices, relabelled 0..k-1 in ascending id order.

    Returns:
        (FiniteGraph, tuple): the subgraph and the original id of each new
        vertex.
    """
    keep = np.unique(np.asarray(list(vertices), dtype=np.int64))
    if keep.size and (keep[0] < 0 or keep[-1] >= graph.vertex_count):
        raise GraphError('Induced subgraph on vertices outside the graph')

    relabel = np.full(graph.vertex_count, -1, dtype=np.int64)
    relabel[keep] = np.arange(keep.size, dtype=np.int64)

    edges = graph.edge_array()
    inside = (relabel[edges[:, 0]] >= 0) & (relabel[edges[:, 1]] >= 0)
    sub = validate_graph(int(keep.size), relabel[edges[inside]])

    return sub, tuple(keep.tolist())


def _check_measure(graph, measure):
    if measure.vertex_count != graph.vertex_count:
        raise MeasureError(
            f'Measure has {measure.vertex_count} weights for a graph with '
            f'{graph.vertex_count} vertices'
        )


def cocycle(measure, x, y):
    """Radon-Nikodym cocycle of an atomic measure: mu(y) / mu(x)."""
    return Fraction(measure.numerators[_vertex(measure, y)],
                    measure.numerators[_vertex(measure, x)])


def _vertex(measure, x):
    if not 0 <= x < measure.vertex_count:
        raise GraphError(f'Vertex {x} out of range [0, {measure.vertex_count})')
    return x


def cocycle_bound_ok(graph, measure):
    """
    Checks 1 - 1/d <= mu(y)/mu(x) <= 1 + 1/d on every ordered edge (x, y),
    d being the maximum degree, in integer arithmetic.

    Returns:
        (bool, tuple | None): whether the bound holds and the first
        violating edge otherwise.
    """
    _check_measure(graph, measure)

    d = graph.max_degree
    if d == 0:
        return True, None

    weights = measure.array
    wx = weights[graph.owners]
    wy = weights[graph.indices]

    # d*mu(y) must lie in [(d-1)*mu(x), (d+1)*mu(x)]
    scaled = wy * d
    violated = (scaled < wx * (d - 1)) | (scaled > wx * (d + 1))
    violated = np.asarray(violated, dtype=bool)

    if violated.any():
        k = int(np.argmax(violated))
        edge = (int(graph.owners[k]), int(graph.indices[k]))
        logger.info(f'Cocycle bound violated on edge {edge}')
        return False, edge

    return True, None


def edgewise_ratio_range(graph, measure):
    """Smallest and largest mu(y)/mu(x) over ordered edges, None if no edges."""
    _check_measure(graph, measure)

    if graph.edge_count == 0:
        return None

    ratios = {Fraction(int(measure.numerators[y]), int(measure.numerators[x]))
              for x, y in zip(graph.owners.tolist(), graph.indices.tolist())}

    return min(ratios), max(ratios)
