from dataclasses import dataclass, field
from enum import Enum

from core.exceptions import ScheduleError


class ScheduleMode(str, Enum):
    CYCLIC = 'cyclic'
    # experiment only: frozen vertices are never scheduled
    FROZEN = 'frozen'


@dataclass(frozen=True)
class Schedule:
    """
    A finite cyclic sequence of independent vertex sets. Round n uses
    classes[n mod period]. Build through core.operators.schedule, which
    checks independence and covering against the graph.
    """

    classes: tuple
    mode: ScheduleMode = ScheduleMode.CYCLIC
    frozen: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'classes',
                           tuple(tuple(sorted(c)) for c in self.classes))
        object.__setattr__(self, 'frozen', tuple(sorted(self.frozen)))
        object.__setattr__(self, 'mode', ScheduleMode(self.mode))

    @property
    def period(self):
        return len(self.classes)

    @property
    def is_cyclic(self):
        return self.mode is ScheduleMode.CYCLIC

    def nth_class(self, n):
        """The class scheduled at round n; empty when there are no classes."""
        if n < 0:
            raise ScheduleError(f'Round index must be nonnegative, got {n}')
        if not self.classes:
            return ()
        return self.classes[n % self.period]

    def class_index(self, n):
        return n % self.period if self.classes else 0

    def relabelled(self, ids):
        """The same schedule with every vertex x renamed ids[x]."""
        return Schedule(
            classes=tuple(tuple(ids[x] for x in c) for c in self.classes),
            mode=self.mode,
            frozen=tuple(ids[x] for x in self.frozen),
        )

    def scheduled_vertices(self):
        return sorted(x for c in self.classes for x in c)
