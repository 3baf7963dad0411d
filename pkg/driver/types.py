from enum import IntEnum


class ExitCode(IntEnum):
    Success = 0
    UserError = 1
    InternalError = 2


class Configuration:
    """One row of a comparison: an engine at a thread count."""

    def __init__(self, *, engine: str, threads: int):
        self.engine = engine
        self.threads = threads

    def __str__(self):
        return f"{self.engine}x{self.threads}"


class Mismatch:

    def __init__(self, *, configuration: Configuration, pred: str, missing: list[str], extra: list[str]):
        self.configuration = configuration
        self.pred = pred
        self.missing = missing
        self.extra = extra

    def __str__(self):
        return (f"{self.configuration}: {self.pred} differs from the reference run, "
                f"{len(self.missing)} rows missing, {len(self.extra)} extra")
