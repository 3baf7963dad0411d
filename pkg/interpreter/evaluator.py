from typing import Callable, Iterator, Optional, ParamSpec, Sequence, TypeVar

from datalog_types import *
from db.relation import TupleSource
from externs.functors import FunctorRegistry
from externs.oracle import OracleSession
from util.metrics import WorkerStats

try:
    from line_profiler import profile
except ImportError:
    P = ParamSpec('P')
    R = TypeVar('R')
    def profile(func: Callable[P, R]) -> Callable[P, R]:
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            return func(*args, **kwargs)
        return wrapper

Fact = tuple[ValueId, ...]
Bindings = dict[str, ValueId]


class EvalContext:
    """What a rule evaluation reports to: the functor registry, an oracle session and counters.

    A suspended evaluation can be resumed by a different worker, which rebinds the session and
    counters; evaluation code reads them through this object on every access.
    """

    def __init__(self, *, registry: FunctorRegistry, session: Optional[OracleSession], stats: WorkerStats):
        self.registry = registry
        self.session = session
        self.stats = stats

    def rebind(self, session: Optional[OracleSession], stats: WorkerStats):
        self.session = session
        self.stats = stats


def eval_term(term: Term, bindings: Bindings, ctx: EvalContext) -> ValueId:
    if isinstance(term, Const):
        return term.value
    elif isinstance(term, Var):
        value = bindings.get(term.name)
        if value is None:
            raise KeyError(f"unbound variable {term.name}")
        return value
    elif isinstance(term, FunctorCall):
        args = tuple(eval_term(a, bindings, ctx) for a in term.args)
        return ctx.registry.call(term.functor, args, ctx.session)
    else:
        raise TypeError("invalid term type")


def _pattern(atom: PredicateAtom, bindings: Bindings, ctx: EvalContext) -> tuple[Optional[ValueId], ...]:
    pattern: list[Optional[ValueId]] = []
    for arg in atom.args:
        if isinstance(arg, Var):
            pattern.append(bindings.get(arg.name))
        else:
            pattern.append(eval_term(arg, bindings, ctx))
    return tuple(pattern)


def _extend(atom: Pos, tuple_: Fact, bindings: Bindings) -> Optional[Bindings]:
    extended: Optional[Bindings] = None
    for arg, value in zip(atom.args, tuple_):
        if not isinstance(arg, Var):
            continue
        current = (extended or bindings).get(arg.name)
        if current is None:
            if extended is None:
                extended = dict(bindings)
            extended[arg.name] = value
        elif current != value:
            return None
    return extended if extended is not None else bindings


def solve(body: Sequence[Atom], sources: Sequence[Optional[TupleSource]], bindings: Bindings,
          ctx: EvalContext, i: int = 0) -> Iterator[Bindings]:
    """Every extension of bindings satisfying body[i:], left to right.

    sources[i] is the relation read by body[i] when it is a positive or negated atom.
    """
    if i == len(body):
        yield bindings
        return
    atom = body[i]
    if isinstance(atom, Pos):
        source = sources[i]
        assert source is not None
        for tuple_ in source.query(_pattern(atom, bindings, ctx)):
            ctx.stats.work += 1
            extended = _extend(atom, tuple_, bindings)
            if extended is not None:
                yield from solve(body, sources, extended, ctx, i + 1)
    elif isinstance(atom, Neg):
        source = sources[i]
        assert source is not None
        if not source.contains(tuple(eval_term(a, bindings, ctx) for a in atom.args)):
            yield from solve(body, sources, bindings, ctx, i + 1)
    elif isinstance(atom, Eq):
        lhs = atom.lhs
        if isinstance(lhs, Var) and lhs.name not in bindings:
            extended = dict(bindings)
            extended[lhs.name] = eval_term(atom.rhs, bindings, ctx)
            yield from solve(body, sources, extended, ctx, i + 1)
        elif eval_term(lhs, bindings, ctx) == eval_term(atom.rhs, bindings, ctx):
            yield from solve(body, sources, bindings, ctx, i + 1)
    elif isinstance(atom, Neq):
        if eval_term(atom.lhs, bindings, ctx) != eval_term(atom.rhs, bindings, ctx):
            yield from solve(body, sources, bindings, ctx, i + 1)
    else:
        raise TypeError("invalid atom type")


def derive(rule: Rule, body: Sequence[Atom], sources: Sequence[Optional[TupleSource]], ctx: EvalContext,
           bindings: Optional[Bindings] = None) -> Iterator[Fact]:
    """Ground head tuples of rule, evaluating body (the rule's body in some order) left to right."""
    try:
        for solution in solve(body, sources, bindings or {}, ctx):
            yield tuple(eval_term(a, solution, ctx) for a in rule.head.args)
    except EvaluationError:
        raise
    except DatalogError as e:
        raise EvaluationError(f"rule #{rule.id}: {e}", e, str(rule)) from e
    except Exception as e:
        raise EvaluationError(f"rule #{rule.id}: internal error: {e}", e, str(rule)) from e


def eval_rule(rule: Rule, body: Sequence[Atom], sources: Sequence[Optional[TupleSource]], ctx: EvalContext,
              sink: Callable[[str, Fact], None], bindings: Optional[Bindings] = None):
    """Runs derive to completion, handing each ground head to sink."""
    pred = rule.head.pred
    for fact in derive(rule, body, sources, ctx, bindings):
        sink(pred, fact)
