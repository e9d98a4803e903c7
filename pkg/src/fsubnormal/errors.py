"""Exception hierarchy shared by every module of the package."""


class GroupError(Exception):
    """Base class for all errors raised by fsubnormal."""


class InvalidPermutation(GroupError, ValueError):
    pass


class OrderCapExceeded(GroupError):
    """A closure, interval or search grew past its configured bound."""


class SubgroupNotContained(GroupError, ValueError):
    pass


class NotNormal(GroupError, ValueError):
    pass


class NotSoluble(GroupError):
    pass


class NotPSoluble(NotSoluble):
    pass


class NotFound(GroupError, LookupError):
    pass


class UnknownFormation(GroupError, KeyError):
    pass


class FormationViolation(GroupError):
    """A membership predicate failed to behave like a formation on some group."""


class UnknownExample(GroupError, KeyError):
    pass


class SingularMatrix(GroupError, ValueError):
    pass


class ParseError(GroupError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
