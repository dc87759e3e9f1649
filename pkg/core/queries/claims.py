"""
Verification queries over flip runs. Every check is an exact comparison
of Fractions or integers; a True result is a proof for that instance, a
False one is a counterexample.
"""
from collections import defaultdict
from fractions import Fraction

import numpy as np

import core.logger.log as log
from core.exceptions import MeasureError, VerificationError
from core.operators.dynamics import cost, potential_M, same_counts
from core.operators.graph import cocycle_bound_ok

logger = log.setup_custom_logger(__name__)

INVARIANT = 'invariant'
QUASI = 'quasi'
VARIANTS = (INVARIANT, QUASI)


def variant_for(measure):
    """Uniform measures use the invariant claim, all others the quasi one."""
    return INVARIANT if measure.is_uniform else QUASI


class ClaimVerifier:
    """
    Checks the per-round potential drop of a run.

    invariant: uniform measure, M(G_n) - M(G_{n+1}) >= 2 mu(B_n) (M counts
    each monochromatic edge from both ends).
    quasi: cocycle within [1 - 1/d, 1 + 1/d] on every edge,
    M(G_n) - M(G_{n+1}) >= mu(B_n).
    """

    def __init__(self, graph, measure, variant):

        if variant not in VARIANTS:
            raise MeasureError(f'Unknown claim variant {variant!r}')

        if variant == INVARIANT and not measure.is_uniform:
            raise MeasureError('The invariant claim needs a uniform measure')

        if variant == QUASI:
            ok, edge = cocycle_bound_ok(graph, measure)
            if not ok:
                x, y = edge
                raise VerificationError(
                    f'Cocycle bound fails on edge {edge}',
                    values={
                        'rho': Fraction(measure.numerators[y],
                                        measure.numerators[x]),
                        'degree_bound': graph.max_degree,
                    },
                )

        self.graph = graph
        self.measure = measure
        self.variant = variant
        self.factor = 2 if variant == INVARIANT else 1

    def check(self, record):
        return record.drop >= self.factor * record.flipped_mass

    def require(self, record):
        if not self.check(record):
            raise VerificationError(
                f'{self.variant} claim fails in round {record.index}',
                round_index=record.index,
                values={
                    'potential_before': record.potential_before,
                    'potential_after': record.potential_after,
                    'flipped_mass': record.flipped_mass,
                    'factor': self.factor,
                },
            )
        return True


def verify_round_claims(graph, measure, record, variant):
    """
    Whether one round satisfies the potential-drop claim of the variant.

    Raises:
        VerificationError: quasi variant on a measure breaking the cocycle
        bound.
    """
    return ClaimVerifier(graph, measure, variant).check(record)


def telescoping_budget(trace, graph, measure, variant=None):
    """cost(G) in the invariant case, M(G_0) in the quasi case."""
    if (variant or variant_for(measure)) == INVARIANT:
        return cost(graph, measure)
    return potential_M(graph, measure, trace.initial_coloring)


def verify_telescoping(trace, graph, measure, variant=None):
    """Summed flipped mass against the starting budget."""
    variant = variant or variant_for(measure)
    spent = trace.flipped_mass_total
    budget = telescoping_budget(trace, graph, measure, variant)

    holds = spent <= budget
    logger.info(f'Telescoping ({variant}): sum mu(B_n) = {spent} <= {budget}: '
                f'{holds}')

    return holds


def verify_unweighted_bound(trace, graph):
    """
    Monochromatic edges drop by at least |B_n| every round, so a run never
    flips more than |E| times.
    """
    for record in trace.rounds:
        if record.monochrome_before - record.monochrome_after < len(
                record.flipped):
            return False

    return trace.total_flips <= graph.edge_count


def verify_flip_counts(trace, measure):
    """Vertex x flips at most M(G_0) / mu(x) times."""
    if not trace.rounds:
        return True

    budget = trace.potential_initial * measure.denominator
    counts = trace.flip_counts()
    for x in np.flatnonzero(counts).tolist():
        if int(counts[x]) * measure.numerators[x] > budget:
            return False

    return True


def verify_symmetric_difference(graph, before, after, flipped):
    """
    The monochromatic subgraph after the round equals the one before it
    with every edge touching a flipped vertex toggled.
    """
    edges = graph.edge_array()
    if edges.size == 0:
        return True

    u, v = edges[:, 0], edges[:, 1]
    mono_before = before.colors[u] == before.colors[v]
    mono_after = after.colors[u] == after.colors[v]

    hit = np.zeros(graph.vertex_count, dtype=bool)
    hit[np.asarray(flipped, dtype=np.int64)] = True
    touching = hit[u] | hit[v]

    return bool(np.array_equal(mono_after, mono_before ^ touching))


def flip_partition(graph, before, after, flipped):
    """
    Splits B_n by (r, s): r same-colored neighbours before the round and
    s after it.

    Returns:
        dict: (r, s) -> tuple of vertices
    """
    if not flipped:
        return {}

    index = np.asarray(flipped, dtype=np.int64)
    r = same_counts(graph, before)[index].tolist()
    s = same_counts(graph, after)[index].tolist()

    parts = defaultdict(list)
    for x, rx, sx in zip(flipped, r, s):
        parts[(rx, sx)].append(x)

    return {key: tuple(members) for key, members in sorted(parts.items())}


def partition_bound(graph, measure, parts):
    """
    Lower bound sum of mu(A_{r,s}) * (2(r - s) - eps(r + s)) on the drop of
    M, with eps = 1/d.
    """
    d = graph.max_degree
    if d == 0 or not parts:
        return Fraction(0)

    epsilon = Fraction(1, d)
    return sum((measure.mass(members) * (2 * (r - s) - epsilon * (r + s))
                for (r, s), members in parts.items()), Fraction(0))


def verify_partition_bound(graph, measure, record, before, after):
    """
    For one round: every flipped vertex has r > s and r + s <= d, and
    drop >= partition bound >= mu(B_n).
    """
    parts = flip_partition(graph, before, after, record.flipped)
    d = graph.max_degree

    for r, s in parts:
        if not (r > s and r + s <= d):
            return False

    bound = partition_bound(graph, measure, parts)
    return record.drop >= bound >= record.flipped_mass


def verify_edge_counting(graph, measure):
    """
    Every edge contributes mu(x) + mu(y) to M, which lies between
    (2 - eps) mu(x) and (2 + eps) mu(x) for eps = 1/d.
    """
    d = graph.max_degree
    if d == 0:
        return True

    wx = measure.array[graph.owners]
    wy = measure.array[graph.indices]
    scaled = (wx + wy) * d

    holds = (scaled >= wx * (2 * d - 1)) & (scaled <= wx * (2 * d + 1))
    return bool(np.asarray(holds, dtype=bool).all())


def verify_replayed_potentials(trace, graph, measure):
    """
    Recomputes every recorded potential and flipped mass from scratch by
    replaying the flips; catches traces whose numbers do not match their
    colorings.
    """
    for record, before, after in trace.replay():
        if potential_M(graph, measure, before) != record.potential_before:
            return False
        if potential_M(graph, measure, after) != record.potential_after:
            return False
        if measure.mass(record.flipped) != record.flipped_mass:
            return False

    return True
