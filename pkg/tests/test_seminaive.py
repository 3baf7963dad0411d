import random

import pytest

from analysis import stratify
from datalog_types import *
from db import Database, Relation
from externs import default_registry
from interpreter import EngineConfig, run_program
from interpreter.evaluator import EvalContext, eval_rule
from interpreter.seminaive import SemiNaiveRunner, rewrite_stratum
from interpreter.utils import delta_first_order, normalize_rule
from programs import CORPUS, TC_GUESS, TC_LINEAR, TREE, int_rows, load_case, run_case
from syntax import parse_program
from util.metrics import WorkerStats

Naive = EngineConfig.Engine.Naive
Seminaive = EngineConfig.Engine.Seminaive

TREE_CLOSURE = {(0, 1), (0, 2), (1, 3), (2, 4), (0, 3), (0, 4)}


def context() -> EvalContext:
    return EvalContext(registry=default_registry(), session=None, stats=WorkerStats(0))


def test_rewrite_linear_rule():
    [stratum] = stratify(parse_program(TC_LINEAR))
    base, step = rewrite_stratum(stratum)
    assert base.delta is None
    assert step.delta == 1
    assert step.delta_position == 1
    [_, first] = rewrite_stratum(stratum, delta_first=True)
    assert first.delta_position == 0
    assert [str(a) for a in first.body] == ["reach(Y, Z)", "edge(X, Y)"]


def test_rewrite_nonlinear_rule_per_occurrence():
    [stratum] = stratify(parse_program(TC_GUESS))
    delta_rules = rewrite_stratum(stratum)
    assert [(d.rule.id, d.delta) for d in delta_rules] == [(0, None), (1, 0), (1, 1)]


@pytest.mark.parametrize("text", [TC_LINEAR, TC_GUESS])
@pytest.mark.parametrize("delta_first", [False, True])
def test_tree_closure(text, delta_first):
    result = run_case(text, {"edge": TREE}, delta_first=delta_first)
    assert int_rows(result, "reach") == TREE_CLOSURE


def test_empty_input():
    result = run_case(TC_LINEAR, {"edge": []})
    assert int_rows(result, "reach") == set()
    assert result.metrics.derived == 0


def test_single_fact():
    for engine in (Naive, Seminaive):
        result = run_case(".decl p(1) output\np(1).\n", {}, engine)
        assert int_rows(result, "p") == {(1,)}
        assert result.derivations == [("p", (intern_int(1),))]


def test_iterations_follow_the_longest_path():
    result = run_case(TC_LINEAR, {"edge": [(i, i + 1) for i in range(5)]})
    # one pass for the base rule, one per extra path length, one that finds nothing
    assert result.metrics.iterations == 6
    assert len(int_rows(result, "reach")) == 15


def test_counter_with_functors():
    result = run_case(CORPUS["counter"][0], {})
    assert int_rows(result, "num") == {(i,) for i in range(11)}


def test_negation_reads_the_finished_lower_stratum():
    text, facts = CORPUS["unreach"]
    result = run_case(text, facts)
    nodes = range(5)
    assert int_rows(result, "unreach") == {(x, y) for x in nodes for y in nodes} - TREE_CLOSURE


def test_eval_rule_with_delta_first():
    program = parse_program(TC_LINEAR)
    step = program.rules[1]
    edge = Relation(name="edge", arity=2)
    edge.add_if_absent((intern_int(0), intern_int(1)))
    delta = Relation(name="δreach", arity=2)
    delta.add_if_absent((intern_int(1), intern_int(3)))
    body = delta_first_order(step.body, 1)
    out: list[tuple[str, tuple[ValueId, ...]]] = []
    ctx = context()
    eval_rule(step, body, [delta, edge], ctx, lambda pred, fact: out.append((pred, fact)))
    assert out == [("reach", (intern_int(0), intern_int(3)))]
    assert ctx.stats.work == 2


def test_eval_rule_disequality_and_functor():
    program = parse_program(".decl q(1)\n.decl p(1)\n.decl r(2)\n"
                            "p(X) :- q(X), X != X.\nr(X, Y) :- q(X), Y = @inc(X).\n")
    q = Relation(name="q", arity=1)
    q.add_if_absent((intern_int(1),))
    out: list[tuple[str, tuple[ValueId, ...]]] = []
    sink = lambda pred, fact: out.append((pred, fact))
    none, inc = program.rules
    eval_rule(none, none.body, [q, None], context(), sink)
    assert out == []
    eval_rule(inc, inc.body, [q, None], context(), sink)
    assert out == [("r", (intern_int(1), intern_int(2)))]


def test_eval_rule_negation_counts_no_work():
    program = parse_program(".decl q(1)\n.decl s(1)\n.decl p(1)\np(X) :- q(X), !s(X).\n")
    q, s = Relation(name="q", arity=1), Relation(name="s", arity=1)
    for v in (1, 2, 3):
        q.add_if_absent((intern_int(v),))
    s.add_if_absent((intern_int(2),))
    out: list[tuple[str, tuple[ValueId, ...]]] = []
    ctx = context()
    rule = program.rules[0]
    eval_rule(rule, rule.body, [q, s], ctx, lambda pred, fact: out.append((pred, fact)))
    assert [f for _, f in out] == [(intern_int(1),), (intern_int(3),)]
    assert ctx.stats.work == 3


def test_functor_errors_are_user_errors():
    program = parse_program(".decl p(1) output\np(@lit(1, 7)).\n")
    with pytest.raises(EvaluationError) as e:
        run_program(program, {}, EngineConfig())
    assert e.value.is_user_error
    assert isinstance(e.value.original_exception, FunctorError)


def test_unstratifiable_program_is_rejected_before_running():
    program = parse_program(".decl q(1) input\n.decl p(1)\np(X) :- q(X), !p(X).\n")
    with pytest.raises(StratificationError):
        run_program(program, {}, EngineConfig())


def test_unsafe_program_is_rejected_before_running():
    program = parse_program(".decl q(1) input\n.decl p(1)\np(X) :- !q(X).\n")
    with pytest.raises(ValidationError) as e:
        run_program(program, {}, EngineConfig())
    assert len(e.value.diagnostics) == 1


def test_normalize_lifts_functor_arguments():
    program = parse_program(".decl n(1)\n.decl h(1)\nh(X) :- n(X), n(@inc(X)).\n")
    rule = normalize_rule(program.rules[0])
    assert str(rule) == "h(X) :- n(X), _F0 = @inc(X), n(_F0)."
    assert rule.id == program.rules[0].id
    plain = parse_program(TC_LINEAR).rules[1]
    assert normalize_rule(plain) is plain


def test_naive_matches_seminaive_on_corpus(corpus_case):
    _, (text, facts) = corpus_case
    program, interned = load_case(text, facts)
    naive = run_program(program, interned, EngineConfig(engine=Naive))
    seminaive = run_program(program, interned, EngineConfig(engine=Seminaive))
    assert naive.snapshot() == seminaive.snapshot()
    assert naive.metrics.derived == seminaive.metrics.derived


def test_naive_matches_seminaive_on_random_programs(program_generator):
    for seed in range(100):
        program, facts = load_case(*program_generator(seed))
        naive = run_program(program, facts, EngineConfig(engine=Naive))
        seminaive = run_program(program, facts, EngineConfig(engine=Seminaive))
        assert naive.snapshot() == seminaive.snapshot(), seed


def test_nonlinear_closure_matches_floyd_warshall(closure):
    rng = random.Random(8)
    for _ in range(50):
        size = rng.randint(1, 12)
        edges = sorted({(rng.randrange(size), rng.randrange(size)) for _ in range(rng.randint(0, 3 * size))})
        result = run_case(TC_GUESS, {"edge": edges})
        assert int_rows(result, "reach") == closure(range(size), edges)


@pytest.mark.parametrize("threads", [2, 4])
def test_partitioned_outer_loop_keeps_output_and_work(corpus_case, threads):
    _, (text, facts) = corpus_case
    program, interned = load_case(text, facts)
    single = run_program(program, interned, EngineConfig(engine=Seminaive))
    parallel = run_program(program, interned, EngineConfig(engine=Seminaive, threads=threads))
    assert parallel.snapshot() == single.snapshot()
    assert parallel.metrics.work == single.metrics.work
    assert parallel.metrics.derived == single.metrics.derived


def test_delta_sets_are_disjoint_across_iterations():
    result = run_case(TC_GUESS, {"edge": [(i, i + 1) for i in range(6)]})
    reach = [fact for pred, fact in result.derivations if pred == "reach"]
    assert len(reach) == len(set(reach)) == 21


class RecordingRunner(SemiNaiveRunner):
    """Keeps a copy of every full relation of the stratum after each merge."""

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.history: list[dict[str, set[tuple[ValueId, ...]]]] = []

    def _merge(self) -> int:
        added = super()._merge()
        self.history.append({p: set(self.db.relation(p).tuples()) for p in self.stratum.preds})
        return added


@pytest.mark.parametrize("workers", [1, 3])
def test_full_relations_only_grow(workers):
    program, facts = load_case(TC_GUESS, {"edge": [(i, i + 1) for i in range(6)] + [(6, 0)]})
    db = Database(program=program)
    db.load("edge", facts["edge"])
    [stratum] = stratify(program)
    contexts = [EvalContext(registry=default_registry(), session=None, stats=WorkerStats(i)) for i in range(workers)]
    runner = RecordingRunner(stratum=stratum, db=db, contexts=contexts, delta_first=False, trace=[])
    iterations = runner.run()
    assert len(runner.history) == iterations > 2
    for before, after in zip(runner.history, runner.history[1:]):
        assert before["reach"] <= after["reach"]
    assert len(runner.history[0]["reach"]) == 7
    assert len(runner.history[-1]["reach"]) == 49
