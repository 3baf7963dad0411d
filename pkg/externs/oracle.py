import logging
import time
from enum import Enum, IntEnum
from typing import Protocol

from datalog_types import *
from .formula import flatten, is_satisfiable

logger = logging.getLogger("oracle")


class Answer(Enum):
    sat = 0
    unsat = 1
    unknown = 2


class CachePolicy(IntEnum):
    Replace = 0
    Union = 1

    def __str__(self):
        return self.name.lower()

    @classmethod
    def loads(cls, name: str) -> "CachePolicy":
        try:
            return cls[name.capitalize()]
        except KeyError:
            raise ValueError(f"unknown cache policy {name}") from None


class OracleBackend(Protocol):

    def check(self, literals: frozenset[ValueId]) -> Answer: ...

    def close(self) -> None: ...


class MockBackend:
    """Propositional literals only: unsatisfiable exactly when a variable occurs with both signs."""

    def check(self, literals: frozenset[ValueId]) -> Answer:
        return Answer.sat if is_satisfiable(literals) else Answer.unsat

    def close(self) -> None:
        pass


class OracleSession:
    """Satisfiability session owned by one worker.

    The conjunct cache models what an incremental solver would still have asserted: a call
    misses once for every conjunct not in the cache. With the replace policy the cache becomes
    the conjuncts of the latest call; with the union policy it keeps everything seen so far.
    """

    def __init__(self, *, worker: int, backend: OracleBackend, policy: CachePolicy = CachePolicy.Replace,
                 latency_us: int = 0, record_trace: bool = True):
        self.worker = worker
        self.backend = backend
        self.policy = policy
        self.latency_us = latency_us
        self.record_trace = record_trace
        self.cache: set[ValueId] = set()
        self.calls = 0
        self.cache_misses = 0
        self.unknowns = 0
        self.trace: list[frozenset[ValueId]] = []
        # formulas this session has flattened; dropped with the session
        self.flattened: dict[ValueId, frozenset[ValueId]] = {}

    def check(self, formula: ValueId) -> Answer:
        literals = flatten(formula, self.flattened)
        misses = len(literals - self.cache)
        self.calls += 1
        self.cache_misses += misses
        if self.record_trace:
            self.trace.append(literals)
        if self.latency_us and misses:
            time.sleep(self.latency_us * misses / 1_000_000)
        answer = self.backend.check(literals)
        if self.policy == CachePolicy.Replace:
            self.cache = set(literals)
        else:
            self.cache |= literals
        return answer

    def is_sat(self, formula: ValueId) -> ValueId:
        answer = self.check(formula)
        if answer == Answer.unknown:
            self.unknowns += 1
            logger.warning(f"worker {self.worker}: solver answered unknown, treating the formula as satisfiable")
            return intern_int(1)
        return intern_int(1 if answer == Answer.sat else 0)

    def close(self):
        self.backend.close()

    def __repr__(self):
        return f"OracleSession(worker={self.worker}, calls={self.calls}, misses={self.cache_misses})"


class OracleConfig:

    class Kind(IntEnum):
        Mock = 0
        SmtLib = 1

        def __str__(self):
            return self.name.lower()

        @classmethod
        def loads(cls, name: str) -> "OracleConfig.Kind":
            match name.lower():
                case "mock":
                    return cls.Mock
                case "smtlib":
                    return cls.SmtLib
                case _:
                    raise ValueError(f"unknown oracle {name}")

    def __init__(self, *, kind: Kind = Kind.Mock, policy: CachePolicy = CachePolicy.Replace, latency_us: int = 0,
                 solver: tuple[str, ...] = ("z3", "-in"), solver_timeout: float = 10.0, record_trace: bool = True):
        self.kind = kind
        self.policy = policy
        self.latency_us = latency_us
        self.solver = solver
        self.solver_timeout = solver_timeout
        self.record_trace = record_trace


def create_session(config: OracleConfig, worker: int) -> OracleSession:
    if config.kind == OracleConfig.Kind.SmtLib:
        from .smtlib import SmtLibBackend
        backend: OracleBackend = SmtLibBackend(
            command=config.solver, timeout=config.solver_timeout, policy=config.policy, worker=worker
        )
    else:
        backend = MockBackend()
    return OracleSession(worker=worker, backend=backend, policy=config.policy, latency_us=config.latency_us,
                         record_trace=config.record_trace)


def create_sessions(config: OracleConfig, count: int) -> list[OracleSession]:
    sessions: list[OracleSession] = []
    try:
        for worker in range(count):
            sessions.append(create_session(config, worker))
    except BaseException:
        close_sessions(sessions)
        raise
    return sessions


def close_sessions(sessions: list[OracleSession]):
    for session in sessions:
        try:
            session.close()
        except Exception as e:
            logger.warning(f"closing oracle session {session.worker} failed: {e}")
