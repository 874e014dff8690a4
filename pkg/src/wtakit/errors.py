class WtaError(Exception):
    """Base class for errors raised by wtakit."""


class AlgebraError(WtaError):
    pass


class ParseError(WtaError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class InvalidRun(WtaError):
    pass


class EmptySemantics(WtaError):
    """The automaton has no useful state, so its semantics is constantly zero."""


class NotApplicable(WtaError):
    pass


class PreconditionError(WtaError):
    pass
