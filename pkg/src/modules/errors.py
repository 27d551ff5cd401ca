"""Exception hierarchy shared by the engine and the command line.

Each family maps to one process exit code (see ``tss_cli.EXIT_CODES``).
"""


class TssError(Exception):
    """Base class for every error raised by the engine."""


class InputError(TssError):
    """Malformed or inconsistent input."""


class PermutationParseError(InputError):
    def __init__(self, message, text="", position=None, line=None):
        self.reason = message
        self.text = text
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}: {text!r}" if text else f"{message}{suffix}")


class DegreeMismatchError(InputError):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"Degree mismatch: {left} != {right}")


class InvalidElementError(InputError):
    pass


class GroupFileError(InputError):
    pass


class UnknownGroupError(InputError):
    pass


class CapExceededError(InputError):
    pass


class EquivarianceError(TssError):
    """A map offered to the collapse check is not equivariant."""

    def __init__(self, element, point, expected, actual):
        self.element = element
        self.point = point
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Map is not equivariant at g={element}, p={point}: f(g.p)={actual!r} but g.f(p)={expected!r}"
        )


class BudgetExceededError(TssError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class RefutationError(TssError):
    """A theorem check failed; ``report`` holds the counterexample payload."""

    def __init__(self, message, report=None):
        self.report = report or {}
        super().__init__(message)
