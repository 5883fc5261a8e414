"""Exception hierarchy shared by all modules."""


class NCDefError(Exception):
    """Base class for every error raised by the library."""


class InvalidIdeal(NCDefError):
    pass


class NotSurjective(NCDefError):
    pass


class NotSmall(NCDefError):
    pass


class IncompatibleData(NCDefError):
    pass


class Unsupported(NCDefError):
    pass


class NotComparable(NCDefError):
    pass


class WindowTooSmall(NCDefError):
    def __init__(self, message, character=None):
        super().__init__(message)
        self.character = character


class InfiniteDimensional(NCDefError):
    pass


class ArityMismatch(NCDefError):
    pass


class NotACocycle(NCDefError):
    pass


class BoundsTooSmall(NCDefError):
    def __init__(self, message, bounds=None):
        super().__init__(message)
        self.bounds = bounds


class NotClosed(NCDefError):
    pass


class IdentityViolation(NCDefError):
    """An identity that must hold by construction failed: an internal bug."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class Obstructed(NCDefError):
    def __init__(self, report):
        super().__init__(f"lift obstructed at stage {report.stage}")
        self.report = report


class InvalidBaseChange(NCDefError):
    pass


class NotGluable(NCDefError):
    pass


class CompatibilityViolated(NCDefError):
    pass


class InvalidDeformation(NCDefError):
    pass
