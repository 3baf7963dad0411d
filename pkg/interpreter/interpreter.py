import logging
import time
from typing import Iterable, Mapping, Optional

from analysis.stratifier import Stratum, stratify
from datalog_types import *
from db import Database
from externs.functors import FunctorRegistry, default_registry
from externs.oracle import OracleConfig, OracleSession, close_sessions, create_sessions
from util.metrics import RunMetrics, WorkerStats
from .config import EngineConfig
from .eager import run_stratum_eager
from .evaluator import EvalContext, Fact
from .seminaive import run_stratum_naive, run_stratum_seminaive

logger = logging.getLogger("engine")

Facts = Mapping[str, Iterable[tuple[ValueId, ...]]]


class RunResult:

    def __init__(self, *, db: Database, metrics: RunMetrics, strata: list[Stratum],
                 derivations: list[tuple[str, Fact]], oracle_traces: list[list[frozenset[ValueId]]]):
        self.db = db
        self.metrics = metrics
        self.strata = strata
        # novel facts in the order they were inserted
        self.derivations = derivations
        # per session, the conjunct set of every oracle call
        self.oracle_traces = oracle_traces

    def snapshot(self, preds: Optional[list[str]] = None) -> dict[str, list[str]]:
        return self.db.snapshot(preds)

    def oracle_trace(self) -> list[frozenset[ValueId]]:
        return [call for trace in self.oracle_traces for call in trace]


def prepare(program: Program, registry: FunctorRegistry) -> list[Stratum]:
    diagnostics = validate(program, registry.arities())
    if diagnostics:
        raise ValidationError(diagnostics)
    return stratify(program)


def _session_count(config: EngineConfig) -> int:
    if config.engine == EngineConfig.Engine.Naive:
        return 1
    return config.threads


def run_program(program: Program, facts: Facts, config: EngineConfig,
                registry: Optional[FunctorRegistry] = None) -> RunResult:
    if registry is None:
        registry = default_registry()
    strata = prepare(program, registry)

    db = Database(program=program)
    for pred, tuples in facts.items():
        db.load(pred, tuples)

    wall_start = time.perf_counter_ns()
    cpu_start = time.process_time_ns()
    sessions: list[OracleSession] = create_sessions(config.oracle, _session_count(config))
    stats = [WorkerStats(i) for i in range(len(sessions))]
    contexts = [EvalContext(registry=registry, session=s, stats=st) for s, st in zip(sessions, stats)]
    derivations: list[tuple[str, Fact]] = []
    iterations = 0
    try:
        for stratum in strata:
            match config.engine:
                case EngineConfig.Engine.Naive:
                    iterations += run_stratum_naive(stratum, db, contexts[0], trace=derivations)
                case EngineConfig.Engine.Seminaive:
                    iterations += run_stratum_seminaive(stratum, db, contexts, delta_first=config.delta_first,
                                                        trace=derivations)
                case EngineConfig.Engine.Eager:
                    run_stratum_eager(stratum, db, registry, sessions, stats, seed=config.seed,
                                      suspend=config.suspend, trace=derivations)
    finally:
        close_sessions(sessions)
    wall_time = (time.perf_counter_ns() - wall_start) / 1e9
    cpu_time = (time.process_time_ns() - cpu_start) / 1e9

    metrics = RunMetrics.merge(
        engine=str(config.engine), threads=config.threads, stats=stats, sessions=sessions,
        wall_time=wall_time, cpu_time=cpu_time, strata=len(strata),
        iterations=iterations if config.engine != EngineConfig.Engine.Eager else 0,
    )
    logger.info(f"{config.engine} run finished: {metrics.derived} derived, work {metrics.work}, "
                f"{metrics.oracle_calls} oracle calls, {metrics.cache_misses} misses in {wall_time:.3f}s")
    return RunResult(db=db, metrics=metrics, strata=strata, derivations=derivations,
                     oracle_traces=[s.trace for s in sessions])


def single_thread_trace(program: Program, facts: Facts,
                        engine: EngineConfig.Engine = EngineConfig.Engine.Eager, *, delta_first: bool = False,
                        oracle: Optional[OracleConfig] = None, suspend: bool = True) -> list[tuple[str, Fact]]:
    """Derivation order of a one-worker run; deterministic for a given program and facts."""
    config = EngineConfig(engine=engine, threads=1, delta_first=delta_first, oracle=oracle, suspend=suspend)
    return run_program(program, facts, config).derivations
