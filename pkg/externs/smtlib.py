import logging
import queue
import shutil
import subprocess
import threading
from typing import Optional

from datalog_types import *
from .formula import literal_parts
from .oracle import Answer, CachePolicy

logger = logging.getLogger("smtlib")


def var_name(var: int) -> str:
    return f"v{var}" if var >= 0 else f"vn{-var}"

def literal_expr(var: int, sign: int) -> str:
    return var_name(var) if sign else f"(not {var_name(var)})"

def guard_name(var: int, sign: int) -> str:
    return f"g_{var_name(var)}_{sign}"


def solver_available(command: tuple[str, ...]) -> bool:
    return bool(command) and shutil.which(command[0]) is not None


class SmtLibProcess:
    """A solver speaking SMT-LIB v2 on stdin/stdout; stdout is drained by a reader thread."""

    def __init__(self, *, command: tuple[str, ...], worker: int):
        self.command = command
        self.worker = worker
        self._lines: queue.Queue[Optional[str]] = queue.Queue()
        try:
            self.process = subprocess.Popen(
                list(command), stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL,
                text=True, bufsize=1,
            )
        except OSError as e:
            raise OracleError(f"cannot start solver {' '.join(command)}: {e}") from None
        self._reader = threading.Thread(target=self._read, name=f"smtlib-reader-{worker}", daemon=True)
        self._reader.start()

    def _read(self):
        stdout = self.process.stdout
        if stdout is not None:
            for line in stdout:
                line = line.strip()
                if line:
                    self._lines.put(line)
        self._lines.put(None)

    def send(self, *commands: str):
        stdin = self.process.stdin
        if stdin is None:
            raise BrokenPipeError("solver stdin closed")
        for command in commands:
            logger.debug(f"worker {self.worker} > {command}")
            stdin.write(command)
            stdin.write("\n")
        stdin.flush()

    def read_line(self, timeout: float) -> Optional[str]:
        """Next output line; None when the solver exited. Raises queue.Empty on timeout."""
        line = self._lines.get(timeout=timeout)
        logger.debug(f"worker {self.worker} < {line}")
        return line

    def kill(self):
        try:
            self.process.kill()
        except OSError:
            pass
        self.process.wait()

    def close(self):
        try:
            self.send("(exit)")
            self.process.wait(timeout=1)
        except (OSError, ValueError, subprocess.TimeoutExpired):
            self.kill()


class SmtLibBackend:
    """Checks conjunctions of boolean literals with an external solver, keeping it incremental.

    Replace policy: only conjuncts missing from the solver are asserted; when the solver holds a
    conjunct the new query lacks, it is reset first. Union policy: every conjunct is asserted once
    behind a guard variable and queries select their conjuncts through check-sat-assuming.
    """

    def __init__(self, *, command: tuple[str, ...], timeout: float, policy: CachePolicy, worker: int = 0):
        if not solver_available(command):
            raise OracleError(f"solver not found: {' '.join(command)}")
        self.command = command
        self.timeout = timeout
        self.policy = policy
        self.worker = worker
        self.resets = 0
        self.restarts = 0
        self._process: Optional[SmtLibProcess] = None
        self._declared: set[int] = set()
        self._asserted: set[tuple[int, int]] = set()

    def _start(self) -> SmtLibProcess:
        if self._process is None:
            self._process = SmtLibProcess(command=self.command, worker=self.worker)
            self._process.send("(set-option :print-success false)", "(set-logic QF_UF)")
            self._declared = set()
            self._asserted = set()
        return self._process

    def _restart(self, reason: str):
        logger.warning(f"worker {self.worker}: {reason}, restarting solver")
        self.restarts += 1
        if self._process is not None:
            self._process.kill()
        self._process = None

    def _commands(self, literals: list[tuple[int, int]]) -> list[str]:
        commands: list[str] = []
        if self.policy == CachePolicy.Replace and not self._asserted <= set(literals):
            self.resets += 1
            logger.debug(f"worker {self.worker}: resetting solver")
            commands += ["(reset)", "(set-option :print-success false)", "(set-logic QF_UF)"]
            self._declared = set()
            self._asserted = set()
        for var, _ in literals:
            if var not in self._declared:
                self._declared.add(var)
                commands.append(f"(declare-const {var_name(var)} Bool)")
        for var, sign in literals:
            if (var, sign) in self._asserted:
                continue
            self._asserted.add((var, sign))
            if self.policy == CachePolicy.Replace:
                commands.append(f"(assert {literal_expr(var, sign)})")
            else:
                guard = guard_name(var, sign)
                commands.append(f"(declare-const {guard} Bool)")
                commands.append(f"(assert (=> {guard} {literal_expr(var, sign)}))")
        if self.policy == CachePolicy.Replace or not literals:
            commands.append("(check-sat)")
        else:
            guards = " ".join(guard_name(var, sign) for var, sign in literals)
            commands.append(f"(check-sat-assuming ({guards}))")
        return commands

    def check(self, literals: frozenset[ValueId]) -> Answer:
        parts = sorted(literal_parts(lit) for lit in literals)
        process = self._start()
        try:
            process.send(*self._commands(parts))
            line = process.read_line(self.timeout)
        except queue.Empty:
            self._restart(f"no answer within {self.timeout}s")
            return Answer.unknown
        except (OSError, ValueError) as e:
            self._restart(f"solver pipe failed: {e}")
            return Answer.unknown
        if line is None:
            self._restart("solver exited")
            return Answer.unknown
        match line:
            case "sat":
                return Answer.sat
            case "unsat":
                return Answer.unsat
            case "unknown":
                return Answer.unknown
            case _:
                self._restart(f"unexpected solver output {line!r}")
                raise OracleError(f"solver protocol desync: expected sat/unsat/unknown, got {line!r}")

    def close(self):
        if self._process is not None:
            self._process.close()
            self._process = None
        logger.info(f"worker {self.worker}: solver closed after {self.resets} resets and {self.restarts} restarts")
