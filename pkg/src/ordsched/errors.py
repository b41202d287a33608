"""Exception hierarchy shared by all modules."""


class OrdschedError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class InvalidRealization(OrdschedError, ValueError):
    pass


class SortOrderViolation(InvalidRealization):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"SortOrderViolation({index}): size at position {index} "
                         f"is smaller than the size at position {index + 1}")


class NegativeSize(InvalidRealization):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"NegativeSize({index}): size at position {index} is negative")


class ParameterOutOfRange(OrdschedError, ValueError):
    pass


class BadParameters(OrdschedError, ValueError):
    pass


class DivisibilityViolation(BadParameters):
    pass


class BadMachineIndex(OrdschedError, ValueError):
    pass


class IncompleteResidueMap(OrdschedError, ValueError):
    pass


class NotTwoMachines(OrdschedError, ValueError):
    pass


class UnsupportedM(OrdschedError, ValueError):
    pass


class BadM(UnsupportedM):
    pass


class SearchLimitExceeded(OrdschedError, RuntimeError):
    pass


class LimitExceeded(OrdschedError, RuntimeError):
    pass


class InsufficientDefinition(OrdschedError, ValueError):
    pass
