import logging
import os
import random
import sys

import pytest

from datalog_types import *
from externs import CachePolicy, OracleConfig, create_session, flatten
from externs.oracle import Answer, MockBackend
from externs.smtlib import SmtLibBackend, solver_available
from oracles import make_formula

Z3 = ("z3", "-in")
FAKE_SOLVER = os.path.join(os.path.dirname(__file__), "fake_solver.py")

needs_z3 = pytest.mark.skipif(not solver_available(Z3), reason="z3 not on PATH")


def fake(mode: str, log: str, policy: CachePolicy = CachePolicy.Replace, timeout: float = 5.0) -> SmtLibBackend:
    return SmtLibBackend(command=(sys.executable, FAKE_SOLVER, mode, log), timeout=timeout, policy=policy)


def literals(*pairs: tuple[int, int]) -> frozenset[ValueId]:
    return flatten(make_formula(pairs))


def test_replace_policy_asserts_only_missing_conjuncts(tmp_path):
    backend = fake("sat", str(tmp_path / "log"))
    assert backend._commands([(1, 1), (2, 0)]) == [
        "(declare-const v1 Bool)", "(declare-const v2 Bool)", "(assert v1)", "(assert (not v2))", "(check-sat)",
    ]
    assert backend._commands([(1, 1), (2, 0), (3, 1)]) == [
        "(declare-const v3 Bool)", "(assert v3)", "(check-sat)",
    ]
    assert backend._commands([(1, 1)]) == [
        "(reset)", "(set-option :print-success false)", "(set-logic QF_UF)",
        "(declare-const v1 Bool)", "(assert v1)", "(check-sat)",
    ]
    assert backend.resets == 1


def test_union_policy_guards_every_conjunct(tmp_path):
    backend = fake("sat", str(tmp_path / "log"), CachePolicy.Union)
    assert backend._commands([(1, 1)]) == [
        "(declare-const v1 Bool)", "(declare-const g_v1_1 Bool)", "(assert (=> g_v1_1 v1))",
        "(check-sat-assuming (g_v1_1))",
    ]
    assert backend._commands([(-4, 1), (1, 0)]) == [
        "(declare-const vn4 Bool)",
        "(declare-const g_vn4_1 Bool)", "(assert (=> g_vn4_1 vn4))",
        "(declare-const g_v1_0 Bool)", "(assert (=> g_v1_0 (not v1)))",
        "(check-sat-assuming (g_vn4_1 g_v1_0))",
    ]
    assert backend.resets == 0


def test_session_talks_to_the_solver(tmp_path):
    log = tmp_path / "log"
    backend = fake("sat", str(log))
    try:
        assert backend.check(literals((1, 1))) == Answer.sat
        assert backend.check(literals((1, 1), (2, 1))) == Answer.sat
    finally:
        backend.close()
    sent = log.read_text().splitlines()
    assert sent[:2] == ["(set-option :print-success false)", "(set-logic QF_UF)"]
    assert sent.count("(check-sat)") == 2
    assert sent[-1] == "(exit)"


def test_protocol_desync_is_an_error(tmp_path):
    backend = fake("garbage", str(tmp_path / "log"))
    try:
        with pytest.raises(OracleError, match="desync"):
            backend.check(literals((1, 1)))
        assert backend.restarts == 1
    finally:
        backend.close()


def test_timeout_answers_unknown(tmp_path, caplog):
    backend = fake("silent", str(tmp_path / "log"), timeout=0.3)
    try:
        assert backend.check(literals((1, 1))) == Answer.unknown
        assert backend.restarts == 1
    finally:
        backend.close()
    assert "restarting solver" in caplog.text


def test_crash_answers_unknown_then_recovers(tmp_path):
    backend = fake("exit", str(tmp_path / "log"))
    try:
        assert backend.check(literals((1, 1))) == Answer.unknown
        assert backend.check(literals((1, 1))) == Answer.unknown
        assert backend.restarts == 2
    finally:
        backend.close()


def test_close_reports_resets_and_restarts(tmp_path, caplog):
    backend = fake("sat", str(tmp_path / "log"))
    with caplog.at_level(logging.INFO, logger="smtlib"):
        try:
            assert backend.check(literals((1, 1))) == Answer.sat
            assert backend.check(literals((2, 1))) == Answer.sat
        finally:
            backend.close()
    assert "worker 0: solver closed after 1 resets and 0 restarts" in caplog.text


def test_missing_solver():
    with pytest.raises(OracleError, match="solver not found"):
        SmtLibBackend(command=("no-such-solver-binary",), timeout=1.0, policy=CachePolicy.Replace)
    config = OracleConfig(kind=OracleConfig.Kind.SmtLib, solver=("no-such-solver-binary",))
    with pytest.raises(OracleError):
        create_session(config, 0)


@needs_z3
def test_z3_examples():
    backend = SmtLibBackend(command=Z3, timeout=10.0, policy=CachePolicy.Replace)
    try:
        assert backend.check(literals((1, 1), (1, 0))) == Answer.unsat
        assert backend.check(literals((1, 1))) == Answer.sat
        assert backend.check(literals()) == Answer.sat
    finally:
        backend.close()


@needs_z3
@pytest.mark.parametrize("policy", list(CachePolicy))
def test_z3_agrees_with_mock(policy):
    rng = random.Random(12)
    mock = MockBackend()
    session = create_session(OracleConfig(kind=OracleConfig.Kind.SmtLib, policy=policy, solver=Z3), 0)
    try:
        for _ in range(500):
            pairs = [(rng.randrange(-3, 8), rng.randint(0, 1)) for _ in range(rng.randint(0, 6))]
            formula = make_formula(pairs)
            assert session.check(formula) == mock.check(flatten(formula)), pairs
    finally:
        session.close()
