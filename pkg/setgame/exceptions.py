class SetGameError(ValueError):
    """Base class of every domain error raised by setgame."""


class ConfigurationError(SetGameError):
    pass


class ParseError(SetGameError):
    """Malformed braces text; `position` is the 0-based offending offset."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(
            '{message} at position {position}'.format(
                message=message,
                position=position,
            )
        )


class GraphFormatError(SetGameError):
    """Malformed graph text; `line` is 1-based, 0 for whole-document errors."""

    def __init__(self, message, line=0):
        self.line = line
        if line:
            message = '{message} on line {line}'.format(
                message=message,
                line=line,
            )
        super().__init__(message)


class InfeasibleError(SetGameError):
    """A level is past the configured enumeration or count cap."""


class BoundExceededError(SetGameError):
    pass


class DomainError(SetGameError):
    """An operation was called outside its precondition."""


class CapExceededError(SetGameError):

    def __init__(self, stage, projected, cap):
        self.stage = stage
        self.projected = projected
        self.cap = cap
        super().__init__(
            'stage {stage} would hold {projected} nodes, over the cap of '
            '{cap}; lower --stages or raise --cap'.format(
                stage=stage,
                projected=projected,
                cap=cap,
            )
        )


class SeedError(SetGameError):
    """The seed structure fails conditions (iii) or (iv)."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            'seed rejected: {violations}'.format(
                violations='; '.join(report.violations),
            )
        )
