import networkx as nx
import pytest

from core.operators.files import FileOperator
from core.operators.graph import validate_graph
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure


@pytest.fixture
def single_edge():
    return validate_graph(2, [(0, 1)])


@pytest.fixture
def four_cycle():
    return validate_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def path3():
    return validate_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def path5():
    return validate_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def triangle():
    return validate_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return validate_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def star():
    """K_{1,3} with centre 0."""
    return validate_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def empty3():
    return validate_graph(3, [])


@pytest.fixture
def uniform():
    return VertexMeasure.uniform


@pytest.fixture
def zeros():
    return Coloring.zeros


@pytest.fixture
def files():
    return FileOperator()


@pytest.fixture
def as_networkx():
    """Converts a FiniteGraph into a networkx Graph for cross-checks."""

    def convert(graph):
        g = nx.Graph()
        g.add_nodes_from(range(graph.vertex_count))
        g.add_edges_from(graph.edges())
        return g

    return convert
