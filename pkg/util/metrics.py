import csv
from typing import Any, Sequence


class WorkerStats:
    """Counters owned by one worker; merged into RunMetrics once the run is over."""

    def __init__(self, worker: int = 0):
        self.worker = worker
        self.work = 0
        self.derived = 0
        self.rederived = 0
        self.items = 0
        self.steals = 0

    def __repr__(self):
        return (f"WorkerStats({self.worker}: work={self.work}, derived={self.derived}, "
                f"rederived={self.rederived}, items={self.items}, steals={self.steals})")


class RunMetrics:

    columns = ["engine", "threads", "wall_time", "cpu_time", "work", "derived", "rederived", "oracle_calls",
               "cache_misses", "unknowns", "strata", "iterations", "steals"]

    def __init__(self, *, engine: str, threads: int, wall_time: float = 0.0, cpu_time: float = 0.0, work: int = 0,
                 derived: int = 0, rederived: int = 0, oracle_calls: int = 0, cache_misses: int = 0, unknowns: int = 0,
                 strata: int = 0, iterations: int = 0, steals: int = 0,
                 per_worker: list[tuple[int, int, int]] | None = None):
        self.engine = engine
        self.threads = threads
        self.wall_time = wall_time
        self.cpu_time = cpu_time
        self.work = work
        self.derived = derived
        self.rederived = rederived
        self.oracle_calls = oracle_calls
        self.cache_misses = cache_misses
        # solver answers that were neither sat nor unsat
        self.unknowns = unknowns
        self.strata = strata
        self.iterations = iterations
        self.steals = steals
        # (calls, misses, items) per worker
        self.per_worker = per_worker or []

    @classmethod
    def merge(cls, *, engine: str, threads: int, stats: Sequence[WorkerStats], sessions: Sequence[Any],
              wall_time: float, cpu_time: float, strata: int, iterations: int) -> "RunMetrics":
        per_worker: list[tuple[int, int, int]] = []
        for i, s in enumerate(stats):
            calls = sessions[i].calls if i < len(sessions) else 0
            misses = sessions[i].cache_misses if i < len(sessions) else 0
            per_worker.append((calls, misses, s.items))
        return cls(
            engine=engine, threads=threads, wall_time=wall_time, cpu_time=cpu_time,
            work=sum(s.work for s in stats), derived=sum(s.derived for s in stats),
            rederived=sum(s.rederived for s in stats),
            oracle_calls=sum(s.calls for s in sessions), cache_misses=sum(s.cache_misses for s in sessions),
            unknowns=sum(s.unknowns for s in sessions),
            strata=strata, iterations=iterations, steals=sum(s.steals for s in stats), per_worker=per_worker,
        )

    def header(self, workers: int | None = None) -> list[str]:
        if workers is None:
            workers = len(self.per_worker)
        header = list(self.columns)
        for k in range(workers):
            header += [f"w{k}_calls", f"w{k}_misses", f"w{k}_items"]
        return header

    def row(self, workers: int | None = None) -> list[str]:
        if workers is None:
            workers = len(self.per_worker)
        row = [self.engine, str(self.threads), f"{self.wall_time:.6f}", f"{self.cpu_time:.6f}", str(self.work),
               str(self.derived), str(self.rederived), str(self.oracle_calls), str(self.cache_misses),
               str(self.unknowns), str(self.strata), str(self.iterations), str(self.steals)]
        for k in range(workers):
            if k < len(self.per_worker):
                row += [str(x) for x in self.per_worker[k]]
            else:
                row += ["", "", ""]
        return row

    def __repr__(self):
        return (f"RunMetrics({self.engine}, threads={self.threads}, work={self.work}, derived={self.derived}, "
                f"calls={self.oracle_calls}, misses={self.cache_misses})")


def emit_csv(metrics: RunMetrics | Sequence[RunMetrics], path: str):
    """One header row, then one row per run; worker columns are padded to the widest run."""
    rows = [metrics] if isinstance(metrics, RunMetrics) else list(metrics)
    if not rows:
        raise ValueError("no metrics to write")
    workers = max(len(m.per_worker) for m in rows)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(rows[0].header(workers))
        for m in rows:
            writer.writerow(m.row(workers))
