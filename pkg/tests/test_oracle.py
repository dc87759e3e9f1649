import networkx as nx
import pytest

import core.operators.dynamics as dynamics
from core.exceptions import OracleError
from core.operators.dynamics import (
    DynamicsOperator,
    flip_round,
    monochrome_edges,
)
from core.operators.generator import GeneratorOperator
from core.operators.graph import validate_graph
from core.operators.oracle import (
    OracleOperator,
    check_fixed_point_equivalence,
    enumerate_colorings,
    min_monochrome_coloring,
)
from core.schema.graph import Coloring


def test_four_cycle_has_six_unfriendly(four_cycle):
    enumeration = enumerate_colorings(four_cycle)
    assert enumeration.size == 16
    assert enumeration.unfriendly_count == 6
    assert enumeration.flags_agree


def test_four_cycle_unfriendly_set(four_cycle):
    codes = enumerate_colorings(four_cycle).unfriendly_codes()
    # the two proper colorings and the four splitting the cycle into two
    # monochromatic paths
    assert codes == [3, 5, 6, 9, 10, 12]


def test_single_edge(single_edge):
    enumeration = enumerate_colorings(single_edge)
    assert enumeration.unfriendly_codes() == [1, 2]


def test_empty_graph_all_unfriendly(empty3):
    assert enumerate_colorings(empty3).unfriendly_count == 8
    assert check_fixed_point_equivalence(empty3)


def test_min_monochrome(four_cycle, triangle, k4):
    assert min_monochrome_coloring(four_cycle)[1] == 0
    assert min_monochrome_coloring(triangle)[1] == 1
    assert min_monochrome_coloring(k4)[1] == 2


def test_min_monochrome_coloring_is_a_max_cut(k4, as_networkx):
    coloring, count = min_monochrome_coloring(k4)
    side = [x for x in range(4) if coloring[x] == 1]
    assert nx.cut_size(as_networkx(k4), side) == k4.edge_count - count


def test_chunked_matches_single_chunk():
    graph = GeneratorOperator().generate('erdos_renyi_capped:12,3,4')
    whole = OracleOperator(chunk_bits=16).enumerate(graph)
    pieces = OracleOperator(chunk_bits=5, workers=3).enumerate(graph)

    assert (whole.unfriendly == pieces.unfriendly).all()
    assert (whole.cut_sizes == pieces.cut_sizes).all()
    assert whole.flags_agree and pieces.flags_agree


def test_engine_lands_in_unfriendly_set():
    graph = GeneratorOperator().generate('random_regular:14,3')
    trace = DynamicsOperator(graph).run()
    oracle = OracleOperator()

    assert oracle.enumerate(graph).unfriendly[trace.final_coloring.code]
    assert (monochrome_edges(graph, trace.final_coloring)
            >= oracle.min_monochrome_coloring(graph)[1])


def test_rows(single_edge):
    rows = list(enumerate_colorings(single_edge).rows())
    assert rows[0] == (0, '00', 0, 0, 0, 0)
    assert rows[1] == (1, '10', 1, 1, 1, 1)


def test_too_large():
    with pytest.raises(OracleError):
        OracleOperator(max_vertices=4).enumerate(validate_graph(5, []))


def test_fixed_points_follow_the_flip_rule(path3):
    enumeration = enumerate_colorings(path3)
    for code in range(enumeration.size):
        coloring = enumeration.coloring(code)
        stable = all(flip_round(path3, coloring, [x])[1] == ()
                     for x in range(3))
        assert enumeration.fixed_point[code] == stable


def test_tie_flipping_rule_breaks_equivalence(path3, four_cycle,
                                              monkeypatch):
    assert check_fixed_point_equivalence(four_cycle)

    monkeypatch.setattr(dynamics, 'flip_decisions',
                        lambda same, degrees: 2 * same >= degrees)
    assert flip_round(path3, Coloring([0, 0, 1]), [1])[1] == (1,)
    # 0011 on the 4-cycle is unfriendly with every vertex tied
    assert not check_fixed_point_equivalence(four_cycle)
    assert not enumerate_colorings(four_cycle).fixed_point[3]
