from fractions import Fraction

import numpy as np

import core.logger.log as log
from core.exceptions import GraphError, MeasureError
from core.operators.graph import distance_array, induced_subgraph
from core.schema.measure import BallMeasure

logger = log.setup_custom_logger(__name__)


def epsilon_for_degree(d):
    """The distortion allowance 1/d for a degree bound d >= 1."""
    if d < 1:
        raise MeasureError(f'No epsilon for degree bound {d}; use 1 for '
                           'edgeless graphs')
    return Fraction(1, d)


def epsilon_for_graph(graph):
    # edgeless graphs: any epsilon works, 1 by convention
    if graph.max_degree == 0:
        return Fraction(1)
    return epsilon_for_degree(graph.max_degree)


def ball_measure(graph, x, epsilon):
    """
    Geometric measure centred at x on its component: y gets
    (1 + epsilon) ** -dist(x, y), normalized by their sum K. For
    epsilon = p/q every mass is (q / (p + q)) ** dist, so all values stay
    exact over the common scale (p + q) ** max_dist.

    Args:
        graph (FiniteGraph):
            The host graph.

        x (int):
            The centre vertex.

        epsilon (Fraction | int | str):
            Positive exact rational.

    Returns:
        BallMeasure
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise MeasureError(f'epsilon must be positive, got {epsilon}')

    distances = distance_array(graph, x)
    component = np.flatnonzero(distances >= 0)
    radii = distances[component].tolist()
    reach = max(radii)

    p, q = epsilon.numerator, epsilon.denominator
    base = p + q
    near = [q ** r for r in range(reach + 1)]
    far = [base ** r for r in range(reach + 1)]

    measure = BallMeasure(
        center=x,
        epsilon=epsilon,
        vertex_count=graph.vertex_count,
        component=tuple(component.tolist()),
        radii=tuple(radii),
        numerators=tuple(near[r] * far[reach - r] for r in radii),
        scale=far[reach],
    )
    logger.info(f'Ball measure at {x}, epsilon {epsilon}: {len(radii)} '
                f'vertices, radius {reach}, K = {measure.normalizer}')

    return measure


def restrict_ball_measure(graph, ball):
    """
    The component carrying a ball measure as a graph of its own, with the
    measure as a strictly positive VertexMeasure on it.

    Returns:
        (FiniteGraph, VertexMeasure, tuple): subgraph, measure, and the
        original id of each subgraph vertex.
    """
    if ball.spans_graph:
        return graph, ball.vertex_measure(), tuple(range(graph.vertex_count))

    sub, mapping = induced_subgraph(graph, ball.component)
    logger.info(f'Ball measure restricted to a component of {len(mapping)} '
                f'of {graph.vertex_count} vertices')

    return sub, ball.vertex_measure(), mapping


def growth_profile(graph, x, r_max):
    """
    Ball sizes |B(x, r)| for r = 0..r_max.

    Returns:
        list
    """
    if r_max < 0:
        raise GraphError(f'r_max must be nonnegative, got {r_max}')

    distances = distance_array(graph, x)
    reached = distances[distances >= 0]
    shells = np.bincount(reached, minlength=r_max + 1)[:r_max + 1]

    return np.cumsum(shells).tolist()


def log_slopes(profile):
    """
    Summary of a growth profile: log(|B(r+1)| / |B(r)|) per step and
    log|B(r)| / r per radius. Reported raw; no growth class is inferred.
    """
    sizes = np.asarray(profile, dtype=np.float64)
    if sizes.size < 2:
        return {'increments': [], 'per_radius': []}

    radii = np.arange(1, sizes.size, dtype=np.float64)
    return {
        'increments': np.diff(np.log(sizes)).tolist(),
        'per_radius': (np.log(sizes[1:]) / radii).tolist(),
    }
