import logging
import traceback
from typing import Callable, Optional, Sequence

from datalog_types import *
from interpreter import EngineConfig, RunResult, run_program
from syntax import load_facts_dir, parse_program
from util.metrics import RunMetrics, emit_csv
from .types import Configuration, ExitCode, Mismatch

logger = logging.getLogger("driver")


def load(program_path: str, facts_dir: str) -> tuple[Program, dict[str, list[tuple[ValueId, ...]]]]:
    with open(program_path, encoding="utf-8") as f:
        program = parse_program(f.read(), program_path)
    return program, load_facts_dir(program, facts_dir)


def guarded(action: Callable[[], ExitCode]) -> ExitCode:
    """Runs action, turning errors into exit codes: user errors are 1, anything else 2."""
    try:
        return action()
    except ValidationError as e:
        for diagnostic in e.diagnostics:
            logger.error(str(diagnostic))
        return ExitCode.UserError
    except DatalogError as e:
        logger.error(str(e))
        return ExitCode.UserError
    except EvaluationError as e:
        if e.is_user_error:
            logger.error(f"{e} (while evaluating {e.rule})")
            return ExitCode.UserError
        logger.error(f"internal error: {e} (while evaluating {e.rule})")
        logger.debug("".join(traceback.format_exception(e)))
        return ExitCode.InternalError
    except OSError as e:
        logger.error(str(e))
        return ExitCode.UserError
    except Exception as e:
        logger.error(f"internal error: {e}")
        logger.debug("".join(traceback.format_exception(e)))
        return ExitCode.InternalError


def run(program_path: str, facts_dir: str, out_dir: str, config: EngineConfig,
        metrics_path: Optional[str] = None) -> ExitCode:
    def action() -> ExitCode:
        program, facts = load(program_path, facts_dir)
        result = run_program(program, facts, config)
        result.db.dump_outputs(out_dir)
        if metrics_path:
            emit_csv(result.metrics, metrics_path)
            logger.info(f"metrics written to {metrics_path}")
        return ExitCode.Success
    return guarded(action)


def diff_snapshots(configuration: Configuration, reference: dict[str, list[str]],
                   snapshot: dict[str, list[str]]) -> list[Mismatch]:
    mismatches: list[Mismatch] = []
    for pred, rows in reference.items():
        other = snapshot.get(pred, [])
        if rows != other:
            missing = sorted(set(rows) - set(other))
            extra = sorted(set(other) - set(rows))
            mismatches.append(Mismatch(configuration=configuration, pred=pred, missing=missing, extra=extra))
    return mismatches


def compare_runs(program: Program, facts: dict[str, list[tuple[ValueId, ...]]], base: EngineConfig,
                 engines: Sequence[EngineConfig.Engine], threads: Sequence[int], repeats: int
                 ) -> tuple[list[RunMetrics], list[Mismatch]]:
    """Runs every engine at every thread count `repeats` times; all outputs must equal the first run's."""
    rows: list[RunMetrics] = []
    mismatches: list[Mismatch] = []
    reference: Optional[dict[str, list[str]]] = None
    for engine in engines:
        for n in threads:
            for _ in range(repeats):
                config = EngineConfig(engine=engine, threads=n, delta_first=base.delta_first, oracle=base.oracle,
                                      seed=base.seed, suspend=base.suspend)
                result: RunResult = run_program(program, facts, config)
                rows.append(result.metrics)
                snapshot = result.snapshot()
                if reference is None:
                    reference = snapshot
                else:
                    mismatches += diff_snapshots(Configuration(engine=str(engine), threads=n), reference, snapshot)
    return rows, mismatches


def compare(program_path: str, facts_dir: str, base: EngineConfig, engines: Sequence[EngineConfig.Engine],
            threads: Sequence[int], repeats: int, out_path: str) -> ExitCode:
    def action() -> ExitCode:
        program, facts = load(program_path, facts_dir)
        rows, mismatches = compare_runs(program, facts, base, engines, threads, repeats)
        emit_csv(rows, out_path)
        logger.info(f"{len(rows)} runs written to {out_path}")
        if mismatches:
            for mismatch in mismatches:
                logger.error(str(mismatch))
            return ExitCode.InternalError
        return ExitCode.Success
    return guarded(action)


__all__ = ["load", "guarded", "run", "diff_snapshots", "compare_runs", "compare"]
