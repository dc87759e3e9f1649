from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from core.exceptions import FlipError, GeneratorError
from core.schema.measure import format_rational
from settings.config import ORACLE_MAX_VERTICES


class Family(str, Enum):
    GRID = 'grid'
    TORUS = 'torus'
    CYCLE = 'cycle'
    PATH = 'path'
    COMPLETE = 'complete'
    RANDOM_REGULAR = 'random_regular'
    REGULAR_TREE_TRUNCATION = 'regular_tree_truncation'
    ERDOS_RENYI_CAPPED = 'erdos_renyi_capped'


# expected parameter names per family, in order
FAMILY_PARAMETERS = {
    Family.GRID: ('width', 'height'),
    Family.TORUS: ('width', 'height'),
    Family.CYCLE: ('n',),
    Family.PATH: ('n',),
    Family.COMPLETE: ('n',),
    Family.RANDOM_REGULAR: ('n', 'd'),
    Family.REGULAR_TREE_TRUNCATION: ('d', 'depth'),
    Family.ERDOS_RENYI_CAPPED: ('n', 'mean_degree', 'cap'),
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    parameters: tuple
    seed: int = 0

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError as e:
            raise GeneratorError(f'Unknown graph family {self.family!r}') from e

        parameters = tuple(int(p) for p in self.parameters)
        expected = FAMILY_PARAMETERS[family]
        if len(parameters) != len(expected):
            raise GeneratorError(
                f'{family.value} takes {len(expected)} parameters '
                f'({", ".join(expected)}), got {len(parameters)}'
            )
        if not 0 <= self.seed < 2 ** 64:
            raise GeneratorError('Seed must be a 64-bit unsigned integer')

        object.__setattr__(self, 'family', family)
        object.__setattr__(self, 'parameters', parameters)

    @classmethod
    def parse(cls, text, seed=0):
        """Reads 'family:p1,p2,...', e.g. 'torus:32,32'."""
        family, _, params = text.partition(':')
        try:
            parameters = tuple(int(p) for p in params.split(',') if p.strip())
        except ValueError as e:
            raise GeneratorError(f'Bad generator parameters in {text!r}') from e
        return cls(family.strip(), parameters, seed)

    def label(self):
        params = ','.join(str(p) for p in self.parameters)
        return f'{self.family.value}:{params}'


class MeasureKind(str, Enum):
    UNIFORM = 'uniform'
    FILE = 'file'
    BALL = 'ball'


@dataclass(frozen=True)
class MeasureSource:
    kind: MeasureKind = MeasureKind.UNIFORM
    path: str = None
    center: int = None
    # None means 1/d for the graph at hand
    epsilon: Fraction = None

    @classmethod
    def parse(cls, text):
        """uniform | ball:CENTER:EPS (EPS 'auto' for 1/d) | a file path."""
        if text == 'uniform':
            return cls()
        if text.startswith('ball:'):
            parts = text.split(':')
            if len(parts) != 3:
                raise FlipError(f'Expected ball:CENTER:EPS, got {text!r}')
            try:
                center = int(parts[1])
                epsilon = None if parts[2] == 'auto' else Fraction(parts[2])
            except (ValueError, ZeroDivisionError) as e:
                raise FlipError(f'Bad ball measure {text!r}') from e
            return cls(MeasureKind.BALL, center=center, epsilon=epsilon)
        return cls(MeasureKind.FILE, path=text)

    def label(self):
        if self.kind is MeasureKind.BALL:
            epsilon = 'auto' if self.epsilon is None else str(self.epsilon)
            return f'ball:{self.center}:{epsilon}'
        if self.kind is MeasureKind.FILE:
            return self.path
        return 'uniform'


VERIFICATIONS = ('claims', 'telescope', 'unfriendly', 'oracle')


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one run needs. graph is either a GeneratorSpec or a path to
    a graph file; schedule is 'greedy', 'singleton', 'singleton:random'
    (seeded by the generator seed), 'singleton:FILE' (a vertex order) or
    'file:FILE' (a schedule file); initial is 'zeros' or a coloring file.
    schedule_path, when set, receives the schedule the run used.
    """

    graph: object
    measure: MeasureSource = field(default_factory=MeasureSource)
    schedule: str = 'greedy'
    initial: str = 'zeros'
    max_rounds: int = None
    verify: tuple = ('claims', 'telescope', 'unfriendly')
    engine: str = 'incremental'
    seed: int = 0
    trace_path: str = None
    summary_path: str = None
    schedule_path: str = None

    def __post_init__(self):
        unknown = set(self.verify) - set(VERIFICATIONS)
        if unknown:
            raise FlipError(f'Unknown verification toggles: {sorted(unknown)}')
        object.__setattr__(self, 'verify', tuple(self.verify))

    def check_oracle_size(self, vertex_count):
        if 'oracle' in self.verify and vertex_count > ORACLE_MAX_VERTICES:
            raise FlipError(
                f'Oracle cross-check needs at most {ORACLE_MAX_VERTICES} '
                f'vertices, graph has {vertex_count}'
            )


@dataclass
class ExperimentReport:
    graph: dict
    measure: str
    schedule: dict
    claim_variant: str
    status: str
    converged: bool
    rounds: int
    total_flips: int
    flipped_mass_total: Fraction
    potential_initial: Fraction
    potential_final: Fraction
    cost: Fraction
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {
            'graph': self.graph,
            'measure': self.measure,
            'schedule': self.schedule,
            'claim_variant': self.claim_variant,
            'status': self.status,
            'converged': self.converged,
            'rounds': self.rounds,
            'total_flips': self.total_flips,
            'flipped_mass_total': format_rational(self.flipped_mass_total),
            'potential_initial': format_rational(self.potential_initial),
            'potential_final': format_rational(self.potential_final),
            'cost': format_rational(self.cost),
            'checks': self.checks,
            'violations': self.violations,
        }


@dataclass
class BoundaryReport:
    """Frozen-boundary truncation experiment; no theorem is asserted."""

    center: int
    inner_radius: int
    outer_radius: int
    vertices: int
    frozen: int
    status: str
    rounds: int
    interior_stable: bool
    last_interior_flip: int
    profile: list
    kind: str = 'frozen-boundary experiment (not a theorem check)'

    def to_dict(self):
        return {
            'kind': self.kind,
            'center': self.center,
            'inner_radius': self.inner_radius,
            'outer_radius': self.outer_radius,
            'vertices': self.vertices,
            'frozen': self.frozen,
            'status': self.status,
            'rounds': self.rounds,
            'interior_stable': self.interior_stable,
            'last_interior_flip': self.last_interior_flip,
            'profile': self.profile,
        }
