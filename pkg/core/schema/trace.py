from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from core.schema.measure import format_rational, parse_rational


class RunStatus(str, Enum):
    CONVERGED = 'Converged'
    MAX_ROUNDS_EXCEEDED = 'MaxRoundsExceeded'


@dataclass(frozen=True)
class RoundRecord:
    """
    One flip round: B_n = flipped (a subset of the scheduled class), its
    mass, the weighted potential M of the monochromatic subgraph before and
    after, and the plain monochromatic edge counts.
    """

    index: int
    class_index: int
    flipped: tuple
    flipped_mass: Fraction
    potential_before: Fraction
    potential_after: Fraction
    monochrome_before: int = 0
    monochrome_after: int = 0

    @property
    def drop(self):
        return self.potential_before - self.potential_after

    def to_dict(self):
        return {
            'n': self.index,
            'class_index': self.class_index,
            'flipped': list(self.flipped),
            'flipped_mass': format_rational(self.flipped_mass),
            'potential_before': format_rational(self.potential_before),
            'potential_after': format_rational(self.potential_after),
            'monochrome_before': self.monochrome_before,
            'monochrome_after': self.monochrome_after,
        }

    @classmethod
    def from_dict(cls, row):
        return cls(
            index=int(row['n']),
            class_index=int(row['class_index']),
            flipped=tuple(int(x) for x in row['flipped']),
            flipped_mass=parse_rational(row['flipped_mass']),
            potential_before=parse_rational(row['potential_before']),
            potential_after=parse_rational(row['potential_after']),
            monochrome_before=int(row.get('monochrome_before', 0)),
            monochrome_after=int(row.get('monochrome_after', 0)),
        )


@dataclass(frozen=True)
class RunTrace:
    rounds: tuple
    initial_coloring: object
    final_coloring: object
    status: RunStatus
    total_flips: int
    period: int
    mode: str = 'cyclic'

    @property
    def converged(self):
        return self.status is RunStatus.CONVERGED

    @property
    def flipped_mass_total(self):
        return sum((r.flipped_mass for r in self.rounds), Fraction(0))

    @property
    def potential_initial(self):
        return self.rounds[0].potential_before if self.rounds else None

    @property
    def potential_final(self):
        return self.rounds[-1].potential_after if self.rounds else None

    def flip_counts(self):
        """How many times each vertex flipped during the run."""
        counts = np.zeros(len(self.initial_coloring), dtype=np.int64)
        for record in self.rounds:
            if record.flipped:
                counts[np.asarray(record.flipped, dtype=np.int64)] += 1
        return counts

    def replay(self):
        """
        Rebuilds the colorings from the initial one and the flipped sets.

        Yields:
            (RoundRecord, coloring before the round, coloring after it)
        """
        coloring = self.initial_coloring
        for record in self.rounds:
            following = coloring.flipped(record.flipped)
            yield record, coloring, following
            coloring = following
