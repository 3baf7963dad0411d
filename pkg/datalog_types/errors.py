from typing import Any, Optional


class SourceSpan:

    def __init__(self, *, file: str, line: int, column: int):
        self.file = file
        self.line = line
        self.column = column

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"

    def __repr__(self):
        return f"SourceSpan({self})"

    def __eq__(self, other: object):
        if not isinstance(other, SourceSpan):
            return False
        return (self.file, self.line, self.column) == (other.file, other.line, other.column)

    def __hash__(self):
        return hash((self.file, self.line, self.column))


class DatalogError(Exception):
    """Root of every error a user can cause: bad programs, bad facts, failing oracles."""


class ParseError(DatalogError):

    def __init__(self, message: str, span: SourceSpan, context: str = ""):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.context = context


class FactsError(DatalogError):

    def __init__(self, message: str, file: str, line: int):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line


class ValidationError(DatalogError):

    def __init__(self, diagnostics: list[Any]):
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


class StratificationError(DatalogError):

    def __init__(self, message: str, negation_edge: tuple[str, str], cycle: list[str]):
        super().__init__(message)
        self.negation_edge = negation_edge
        self.cycle = cycle


class FunctorError(DatalogError):
    pass


class OracleError(DatalogError):
    pass


class InternerError(Exception):
    pass


class RelationError(Exception):
    pass


class EvaluationError(Exception):
    def __init__(self, message: str, exception: Optional[BaseException], rule: str):
        super().__init__(message)
        self.original_exception = exception
        self.rule = rule

    @property
    def is_user_error(self):
        return isinstance(self.original_exception, DatalogError)
