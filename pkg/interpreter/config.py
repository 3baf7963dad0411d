from enum import IntEnum

from externs.oracle import OracleConfig


class EngineConfig:

    class Engine(IntEnum):
        Naive = 0
        Seminaive = 1
        Eager = 2

        def __str__(self):
            return self.name.lower()

        @classmethod
        def loads(cls, name: str) -> "EngineConfig.Engine":
            try:
                return cls[name.capitalize()]
            except KeyError:
                raise ValueError(f"unknown engine {name}") from None

    def __init__(self, *, engine: Engine = Engine.Seminaive, threads: int = 1, delta_first: bool = False,
                 oracle: OracleConfig | None = None, seed: int = 0, suspend: bool = True):
        if threads < 1:
            raise ValueError("threads must be at least 1")
        self.engine = engine
        self.threads = threads
        # semi-naive only; the eager engine always puts the specialized atom first
        self.delta_first = delta_first
        self.oracle = oracle or OracleConfig()
        self.seed = seed
        # eager only: suspend a running item when it derives a fact that spawns work
        self.suspend = suspend

    def __repr__(self):
        return (f"EngineConfig({self.engine}, threads={self.threads}, delta_first={self.delta_first}, "
                f"oracle={self.oracle.kind}, seed={self.seed}, suspend={self.suspend})")
