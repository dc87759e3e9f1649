class FlipError(ValueError):
    """Base class for invalid input to the flip-sequence engines."""


class GraphError(FlipError):
    pass


class MeasureError(FlipError):
    pass


class ScheduleError(FlipError):
    pass


class OracleError(FlipError):
    pass


class GeneratorError(FlipError):
    pass


class VerificationError(AssertionError):
    """
    A checked inequality failed. The offending round (None for whole-run
    checks) and the exact values are kept for the report.
    """

    def __init__(self, message, round_index=None, values=None):
        super().__init__(message)
        self.round_index = round_index
        self.values = dict(values or {})

    def as_dict(self):
        return {
            'message': str(self),
            'round': self.round_index,
            'values': {k: str(v) for k, v in self.values.items()},
        }


class ConvergenceError(VerificationError):
    """A cyclic run used up a budget that is provably sufficient."""
