from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import numpy as np

from core.exceptions import MeasureError


# numerators above this stay Python ints (object arrays) so sums never wrap
INT64_SAFE = 2 ** 31


def format_rational(value):
    """Lowest-terms 'numerator/denominator', always with the slash."""
    value = Fraction(value)
    return f'{value.numerator}/{value.denominator}'


def parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise MeasureError(f'Not an exact rational: {text!r}') from e


@dataclass(frozen=True)
class VertexMeasure:
    """
    Positive atomic measure on the vertices 0..n-1, stored over a common
    denominator: vertex x has mass numerators[x] / denominator. Keeping the
    denominator shared lets potentials be summed as integers and turned into
    an exact Fraction once.
    """

    numerators: tuple
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'numerators',
                           tuple(int(v) for v in self.numerators))

        if self.denominator <= 0:
            raise MeasureError(f'Denominator must be positive, got '
                               f'{self.denominator}')
        if self.numerators and min(self.numerators) <= 0:
            x = min(range(len(self.numerators)),
                    key=self.numerators.__getitem__)
            raise MeasureError(f'Vertex {x} has non-positive weight')

    @classmethod
    def uniform(cls, n):
        return cls((1,) * n, max(n, 1))

    @classmethod
    def from_fractions(cls, weights):
        weights = [Fraction(w) for w in weights]
        common = lcm(*(w.denominator for w in weights)) if weights else 1
        return cls(tuple(w.numerator * (common // w.denominator)
                         for w in weights), common)

    @property
    def vertex_count(self):
        return len(self.numerators)

    @cached_property
    def total(self):
        return Fraction(sum(self.numerators), self.denominator)

    @cached_property
    def is_uniform(self):
        return len(set(self.numerators)) <= 1

    @cached_property
    def array(self):
        """Numerators as int64 when small enough, else as Python ints."""
        if self.numerators and max(self.numerators) >= INT64_SAFE:
            array = np.array(self.numerators, dtype=object)
        else:
            array = np.array(self.numerators, dtype=np.int64)
        array.setflags(write=False)
        return array

    def weight(self, x):
        if not 0 <= x < self.vertex_count:
            raise MeasureError(f'Vertex {x} has no weight')
        return Fraction(self.numerators[x], self.denominator)

    def weights(self):
        return [Fraction(v, self.denominator) for v in self.numerators]

    def mass(self, vertices):
        return Fraction(sum(self.numerators[x] for x in vertices),
                        self.denominator)

    def normalized(self):
        if not self.numerators:
            return self
        total = sum(self.numerators)
        common = gcd(total, *self.numerators)
        return VertexMeasure(tuple(v // common for v in self.numerators),
                             total // common)


@dataclass(frozen=True)
class BallMeasure:
    """
    Geometric measure centred at a vertex: y in the component of the centre
    carries (1 + epsilon) ** -dist(center, y) / normalizer, every other vertex
    carries nothing.

    component lists the supporting vertices in ascending order, radii and
    numerators are aligned with it; the unnormalized mass of component[i] is
    numerators[i] / scale.
    """

    center: int
    epsilon: Fraction
    vertex_count: int
    component: tuple
    radii: tuple
    numerators: tuple
    scale: int

    @cached_property
    def unnormalized_total(self):
        return sum(self.numerators)

    @cached_property
    def normalizer(self):
        return Fraction(self.unnormalized_total, self.scale)

    @cached_property
    def _position(self):
        return {y: i for i, y in enumerate(self.component)}

    def weight(self, y):
        i = self._position.get(y)
        if i is None:
            return Fraction(0)
        return Fraction(self.numerators[i], self.unnormalized_total)

    def total(self):
        return sum((self.weight(y) for y in self.component), Fraction(0))

    @property
    def spans_graph(self):
        return len(self.component) == self.vertex_count

    def vertex_measure(self):
        """
        The normalized measure on the component, indexed by position in
        component (matching the relabelling of an induced subgraph).
        """
        return VertexMeasure(self.numerators,
                             self.unnormalized_total).normalized()
