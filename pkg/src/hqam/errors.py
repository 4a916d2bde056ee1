"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class HqamError(Exception):
    exit_code = 1


class ConstraintViolation(HqamError, ValueError):
    """A gain does not exceed the sum of all weaker gains on its branch."""

    exit_code = 2

    def __init__(self, branch: str, index: int, gain: float, bound: float):
        self.branch = branch
        self.index = index
        self.gain = gain
        self.bound = bound
        super().__init__(
            f"{branch} gain at index {index} ({gain!r}) must exceed the sum "
            f"of lower gains ({bound!r})"
        )


class NonPositiveGain(HqamError, ValueError):
    exit_code = 2


class InvalidStretch(HqamError, ValueError):
    pass


class TooLarge(HqamError):
    exit_code = 3


class LengthMismatch(HqamError, ValueError):
    pass


class InvalidConfig(HqamError, ValueError):
    pass


class TargetOutOfRange(HqamError, ValueError):
    pass
