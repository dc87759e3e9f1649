import csv
import json
from fractions import Fraction

import pytest

from core.exceptions import FlipError, GraphError, ScheduleError
from core.operators.dynamics import DynamicsOperator
from core.operators.generator import GeneratorOperator
from core.operators.schedule import frozen_boundary_schedule, greedy_schedule
from core.schema.graph import Coloring
from core.schema.measure import VertexMeasure
from core.schema.trace import RoundRecord


def test_graph_file(files, tmp_path, four_cycle):
    path = tmp_path / 'c4.txt'
    files.write_graph(four_cycle, str(path))

    assert path.read_text() == '4 4\n0 1\n0 3\n1 2\n2 3\n'
    assert files.read_graph(str(path)) == four_cycle


def test_generated_graph_bytes_are_stable(files, tmp_path):
    first, second = tmp_path / 'a.txt', tmp_path / 'b.txt'
    for path in (first, second):
        graph = GeneratorOperator().generate('random_regular:50,3')
        files.write_graph(graph, str(path))
    assert first.read_bytes() == second.read_bytes()


def test_graph_edge_count_mismatch(files, tmp_path):
    path = tmp_path / 'bad.txt'
    path.write_text('3 2\n0 1\n')
    with pytest.raises(GraphError, match='announces 2 edges'):
        files.read_graph(str(path))


def test_graph_with_self_loop(files, tmp_path):
    path = tmp_path / 'loop.txt'
    path.write_text('2 1\n1 1\n')
    with pytest.raises(GraphError):
        files.read_graph(str(path))


def test_missing_file(files, tmp_path):
    with pytest.raises(FlipError, match='No such file'):
        files.read_graph(str(tmp_path / 'nowhere.txt'))


def test_measure_file(files, tmp_path):
    path = tmp_path / 'mu.txt'
    path.write_text('1/3\n2/6\n1/3\n')
    measure = files.read_measure(str(path), 3)

    assert measure.is_uniform
    assert measure.weights() == [Fraction(1, 3)] * 3

    files.write_measure(VertexMeasure((2, 1), 6), str(path))
    assert path.read_text() == '1/3\n1/6\n'


def test_measure_length_mismatch(files, tmp_path):
    path = tmp_path / 'mu.txt'
    path.write_text('1/2\n1/2\n')
    with pytest.raises(FlipError):
        files.read_measure(str(path), 3)


def test_coloring_file(files, tmp_path):
    path = tmp_path / 'c.txt'
    files.write_coloring(Coloring([1, 0, 1]), str(path))
    assert files.read_coloring(str(path), 3) == Coloring([1, 0, 1])

    path.write_text('0\n2\n')
    with pytest.raises(FlipError):
        files.read_coloring(str(path))


def test_schedule_file(files, tmp_path, path5, four_cycle):
    path = tmp_path / 's.txt'

    files.write_schedule(greedy_schedule(four_cycle), str(path))
    assert path.read_text() == 'period 2 mode cyclic\n0 2\n1 3\n'
    assert files.read_schedule(str(path)) == greedy_schedule(four_cycle)

    frozen = frozen_boundary_schedule(path5, [0, 4])
    files.write_schedule(frozen, str(path))
    assert path.read_text().splitlines()[1] == 'frozen 0 4'
    assert files.read_schedule(str(path)) == frozen


def test_schedule_class_count_mismatch(files, tmp_path):
    path = tmp_path / 's.txt'
    path.write_text('period 3 mode cyclic\n0 2\n1 3\n')
    with pytest.raises(ScheduleError):
        files.read_schedule(str(path))


def test_trace_keeps_exact_values(files, tmp_path, four_cycle):
    trace = DynamicsOperator(four_cycle).run()
    path = tmp_path / 'trace.jsonl'
    files.write_trace(trace, str(path))

    lines = path.read_text().splitlines()
    assert json.loads(lines[0]) == {
        'n': 0,
        'class_index': 0,
        'flipped': [0, 2],
        'flipped_mass': '1/2',
        'potential_before': '2/1',
        'potential_after': '0/1',
        'monochrome_before': 4,
        'monochrome_after': 0,
    }
    assert tuple(files.read_trace(str(path))) == trace.rounds


def test_malformed_trace(files, tmp_path):
    path = tmp_path / 'trace.jsonl'
    path.write_text('{"n": 0}\n')
    with pytest.raises(FlipError):
        files.read_trace(str(path))


def test_summary_uses_decimals(files, tmp_path):
    grid = GeneratorOperator().generate('grid:3,3')
    measure = VertexMeasure.uniform(9)
    trace = DynamicsOperator(grid, measure).run()
    path = tmp_path / 'summary.csv'
    files.write_summary(trace, str(path))

    with open(path, newline='') as handle:
        rows = list(csv.DictReader(handle))

    assert len(rows) == len(trace.rounds)
    first = trace.rounds[0]
    assert float(rows[0]['potential_before']) == pytest.approx(
        float(first.potential_before))
    assert int(rows[0]['flips']) == len(first.flipped)


def test_round_record_from_dict_defaults():
    record = RoundRecord.from_dict({
        'n': 3, 'class_index': 1, 'flipped': [], 'flipped_mass': '0',
        'potential_before': '1/2', 'potential_after': '1/2',
    })
    assert record.drop == 0
    assert record.monochrome_before == 0
