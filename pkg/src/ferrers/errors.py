"""Exception hierarchy.

Every error carries a short machine-readable ``reason`` (the class name) so
the CLI can report it and pick an exit code.
"""


class FerrersError(Exception):
    exit_code = 1

    @property
    def reason(self) -> str:
        return type(self).__name__


class InputError(FerrersError, ValueError):
    """Malformed or invalid input data."""

    exit_code = 2


class NotAPartition(InputError):
    pass


class MuOutOfRange(InputError):
    pass


class WidthLessThanHeight(InputError):
    pass


class LengthMismatch(InputError):
    pass


class MalformedInput(InputError):
    pass


class NotDegreeTwo(InputError):
    pass


class ZeroIdeal(InputError):
    pass


class HypothesisError(FerrersError):
    """A hypothesis needed for the requested computation fails."""

    exit_code = 3


class MuTooSmall(HypothesisError):
    pass


class IsolatedVertex(HypothesisError):
    pass


class NotShapeRepresentable(HypothesisError):
    pass


class NotThreshold(HypothesisError):
    pass


class ConditionFailed(FerrersError):
    exit_code = 5


class NotGuaranteedMinimal(UserWarning):
    """Issued when Betti numbers are read off a complex that need not be minimal."""
