import argparse
import logging
import os
import shlex
import sys

from dotenv import load_dotenv

load_dotenv()

from bench import bench_gen
from driver import ExitCode, compare, run
from externs.oracle import CachePolicy, OracleConfig
from interpreter import EngineConfig
from util.set_proc_title import set_proc_title


def setup_logging():
    level = logging.DEBUG if os.environ.get("DEBUG", False) else logging.INFO
    root = logging.getLogger()
    if any(h.name == "eager-datalog" for h in root.handlers):
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.name = "eager-datalog"
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s: %(message)s"))
    root.setLevel(level)
    root.addHandler(handler)


def env_flag(name: str, default: bool) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


def add_engine_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--delta-first", action="store_true", default=env_flag("DATALOG_DELTA_FIRST", False),
                        help="semi-naive: evaluate the delta atom first")
    parser.add_argument("--oracle", choices=["mock", "smtlib"], default=os.environ.get("DATALOG_ORACLE", "mock"))
    parser.add_argument("--oracle-latency-us", type=int,
                        default=int(os.environ.get("DATALOG_ORACLE_LATENCY_US", "0")),
                        help="artificial delay per conjunct cache miss")
    parser.add_argument("--cache-policy", choices=["replace", "union"],
                        default=os.environ.get("DATALOG_CACHE_POLICY", "replace"))
    parser.add_argument("--solver", default=os.environ.get("DATALOG_SMT_SOLVER", "z3 -in"),
                        help="SMT-LIB solver command line")
    parser.add_argument("--solver-timeout", type=float, default=float(os.environ.get("DATALOG_SMT_TIMEOUT", "10")))
    parser.add_argument("--seed", type=int, default=int(os.environ.get("DATALOG_SEED", "0")))
    parser.add_argument("--no-suspend", action="store_false", dest="suspend",
                        default=env_flag("DATALOG_EAGER_SUSPEND", True),
                        help="eager: finish each work item before starting the ones it spawned")


def engine_config(args: argparse.Namespace, engine: str = "seminaive", threads: int = 1) -> EngineConfig:
    oracle = OracleConfig(
        kind=OracleConfig.Kind.loads(args.oracle), policy=CachePolicy.loads(args.cache_policy),
        latency_us=args.oracle_latency_us, solver=tuple(shlex.split(args.solver)), solver_timeout=args.solver_timeout,
    )
    return EngineConfig(engine=EngineConfig.Engine.loads(engine), threads=threads, delta_first=args.delta_first,
                        oracle=oracle, seed=args.seed, suspend=args.suspend)


def parse_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eager-datalog", description="Bottom-up Datalog with eager evaluation")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="evaluate a program and dump its output relations")
    run_parser.add_argument("program")
    run_parser.add_argument("--facts", default=".", help="directory holding <pred>.facts files")
    run_parser.add_argument("--out", default="out", help="directory receiving <pred>.csv files")
    run_parser.add_argument("--engine", choices=["naive", "seminaive", "eager"],
                            default=os.environ.get("DATALOG_ENGINE", "seminaive"))
    run_parser.add_argument("--threads", type=int, default=int(os.environ.get("DATALOG_THREADS", "1")))
    run_parser.add_argument("--metrics", help="write run metrics as CSV to this path")
    add_engine_arguments(run_parser)

    bench_parser = commands.add_parser("bench-gen", help="write a labelled-tree reachability instance")
    bench_parser.add_argument("--kind", choices=["tree-reach", "small-tree"], default="tree-reach")
    bench_parser.add_argument("--depth", "-d", type=int, default=2)
    bench_parser.add_argument("--branching", "-b", type=int, default=2)
    bench_parser.add_argument("--contradiction-rate", "-r", type=float, default=0.0)
    bench_parser.add_argument("--seed", type=int, default=int(os.environ.get("DATALOG_SEED", "0")))
    bench_parser.add_argument("--out", default="bench")

    compare_parser = commands.add_parser("compare", help="run several engines and thread counts, check they agree")
    compare_parser.add_argument("program")
    compare_parser.add_argument("--facts", default=".")
    compare_parser.add_argument("--engines", default="seminaive,eager")
    compare_parser.add_argument("--threads", default="1")
    compare_parser.add_argument("--repeats", type=int, default=1)
    compare_parser.add_argument("--out", default="compare.csv", help="comparison CSV path")
    add_engine_arguments(compare_parser)
    return parser


def main(argv: list[str] | None = None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)
    set_proc_title(f"eager-datalog: {args.command}")
    try:
        match args.command:
            case "run":
                config = engine_config(args, args.engine, args.threads)
                return run(args.program, args.facts, args.out, config, args.metrics)
            case "bench-gen":
                bench_gen(args.kind, args.out, args.depth, args.branching, args.contradiction_rate, args.seed)
                return ExitCode.Success
            case "compare":
                base = engine_config(args)
                engines = [EngineConfig.Engine.loads(e) for e in parse_list(args.engines)]
                threads = [int(t) for t in parse_list(args.threads)]
                return compare(args.program, args.facts, base, engines, threads, args.repeats, args.out)
            case _:
                raise NotImplementedError
    except (ValueError, OSError) as e:
        logging.getLogger("driver").error(str(e))
        return ExitCode.UserError


if __name__ == '__main__':
    sys.exit(main())
