"""Exception types shared across the package."""


class HaarisoError(Exception):
    """Base class for every error raised by the package."""


class InvalidSpecification(HaarisoError, ValueError):
    pass


class BudgetExhausted(HaarisoError):
    """A configured bound (group size, element cap, search nodes) was exceeded.

    ``partial`` carries whatever was computed before giving up, if anything.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotNormal(HaarisoError, ValueError):
    pass


class Unsupported(HaarisoError):
    pass


class NotTransitive(HaarisoError, ValueError):
    pass


class NotABlockSystem(HaarisoError, ValueError):
    pass


class NotAGraph(HaarisoError, ValueError):
    pass


class InvalidMap(HaarisoError, ValueError):
    pass


class InvalidAction(HaarisoError, ValueError):
    pass


class WrongCase(HaarisoError, ValueError):
    pass


class DegenerateInput(HaarisoError, ValueError):
    pass
