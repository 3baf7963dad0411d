import logging
from enum import IntEnum
from typing import Iterator, Optional, Sequence

from analysis.stratifier import Stratum
from datalog_types import *
from db import Database, SingletonRelation, TupleSource, plan_indexes
from externs.functors import FunctorRegistry
from externs.oracle import OracleSession
from util.metrics import WorkerStats
from .evaluator import EvalContext, Fact, derive, profile
from .pool import WorkStealingPool
from .utils import delta_first_order, normalize_rule, recursive_occurrences, unify

logger = logging.getLogger("eager")


class WorkItem:

    class Type(IntEnum):
        NonRecursive = 0
        Specialized = 1
        Resumption = 2

    type: Type


class NonRecursiveItem(WorkItem):
    type = WorkItem.Type.NonRecursive

    def __init__(self, *, rule_id: int):
        self.rule_id = rule_id

    def __repr__(self):
        return f"NonRecursive(#{self.rule_id})"


class SpecializedItem(WorkItem):
    """A rule specialized to one new fact at one body occurrence, kept unapplied until it runs."""
    type = WorkItem.Type.Specialized

    def __init__(self, *, rule: Rule, occurrence: int, fact: Fact, substitution: Substitution):
        self.rule = rule
        self.occurrence = occurrence
        self.fact = fact
        self.substitution = substitution

    @property
    def rule_id(self) -> int:
        return self.rule.id

    def materialize(self) -> Rule:
        """The substituted rule with the specialized atom moved first."""
        rotated = Rule(head=self.rule.head, body=delta_first_order(self.rule.body, self.occurrence),
                       id_=self.rule.id, span=self.rule.span)
        return apply_rule(self.substitution, rotated)

    def __eq__(self, other: object):
        if not isinstance(other, SpecializedItem):
            return False
        return (self.rule.id, self.occurrence, self.fact) == (other.rule.id, other.occurrence, other.fact)

    def __hash__(self):
        return hash((self.rule.id, self.occurrence, self.fact))

    def __repr__(self):
        return f"Specialized(#{self.rule.id}@{self.occurrence}, {self.fact})"


class Resumption(WorkItem):
    """The rest of an evaluation that stopped after deriving a fact with consequences."""
    type = WorkItem.Type.Resumption

    def __init__(self, *, rule: Rule, derivations: Iterator[Fact], ctx: EvalContext):
        self.rule = rule
        self.derivations = derivations
        self.ctx = ctx

    def __repr__(self):
        return f"Resumption(#{self.rule.id})"


def specialize(rule: Rule, occurrence: int, fact: Fact) -> Optional[SpecializedItem]:
    """None when body atom `occurrence` of the (normalized) rule does not unify with fact."""
    atom = rule.body[occurrence]
    if not isinstance(atom, Pos):
        raise TypeError("only positive atoms can be specialized")
    substitution = unify(atom, fact)
    if substitution is None:
        return None
    return SpecializedItem(rule=rule, occurrence=occurrence, fact=fact, substitution=substitution)


class EagerEvaluator:
    """Evaluates one stratum tuple at a time, newest facts first, on a work-stealing pool."""

    def __init__(self, *, stratum: Stratum, db: Database, registry: FunctorRegistry,
                 sessions: Sequence[Optional[OracleSession]], stats: Sequence[WorkerStats], seed: int = 0,
                 suspend: bool = True, trace: Optional[list[tuple[str, Fact]]] = None):
        self.stratum = stratum
        self.db = db
        self.registry = registry
        self.sessions = sessions
        self.stats = stats
        self.suspend = suspend
        self.trace = trace if trace is not None else []
        self.rules = {r.id: normalize_rule(r) for r in stratum.rules}

        # (rule id, occurrence) per recursive predicate, ascending
        self.occurrences: dict[str, list[tuple[int, int]]] = {}
        self.orders: dict[tuple[int, int], tuple[Atom, ...]] = {}
        self.seeds: list[int] = []
        for rule_id, rule in self.rules.items():
            occurrences = recursive_occurrences(rule, stratum.recursive_preds)
            if not occurrences:
                self.seeds.append(rule_id)
            for k in occurrences:
                atom = rule.body[k]
                assert isinstance(atom, Pos)
                self.occurrences.setdefault(atom.pred, []).append((rule_id, k))
                self.orders[rule_id, k] = delta_first_order(rule.body, k)
        for occurrences in self.occurrences.values():
            occurrences.sort()
        db.add_indexes(plan_indexes([*(r.body for r in self.rules.values()), *self.orders.values()]))

        self.pool: WorkStealingPool[WorkItem] = WorkStealingPool(
            workers=len(stats), execute=self.execute, seed=seed,
        )

    def _context(self, worker: int) -> EvalContext:
        return EvalContext(registry=self.registry, session=self.sessions[worker], stats=self.stats[worker])

    def start(self, item: WorkItem, ctx: EvalContext) -> Iterator[Fact]:
        if isinstance(item, NonRecursiveItem):
            rule = self.rules[item.rule_id]
            sources: list[Optional[TupleSource]] = [
                self.db.relation(a.pred) if isinstance(a, Pos | Neg) else None for a in rule.body
            ]
            return derive(rule, rule.body, sources, ctx)
        elif isinstance(item, SpecializedItem):
            body = self.orders[item.rule.id, item.occurrence]
            delta = body[0]
            assert isinstance(delta, Pos)
            sources = [SingletonRelation(name=delta.pred, fact=item.fact)]
            sources += [self.db.relation(a.pred) if isinstance(a, Pos | Neg) else None for a in body[1:]]
            return derive(item.rule, body, sources, ctx)
        else:
            raise TypeError("invalid work item type")

    def on_derive(self, pred: str, fact: Fact, worker: int, resumption: Optional[Resumption] = None) -> int:
        """Inserts fact; if it is new, pushes its specializations on the worker's deque.

        When resumption is given and something is pushed, it goes first, underneath the new items.
        Returns the number of specialized items pushed.
        """
        stats = self.stats[worker]
        if not self.db.relation(pred).add_if_absent(fact):
            stats.rederived += 1
            return 0
        stats.derived += 1
        self.trace.append((pred, fact))
        items: list[SpecializedItem] = []
        for rule_id, k in self.occurrences.get(pred, ()):
            item = specialize(self.rules[rule_id], k, fact)
            if item is not None:
                items.append(item)
        if items and resumption is not None:
            self.pool.push(worker, resumption)
        for item in items:
            self.pool.push(worker, item)
        return len(items)

    @profile
    def execute(self, item: WorkItem, worker: int):
        if isinstance(item, Resumption):
            item.ctx.rebind(self.sessions[worker], self.stats[worker])
            rule, ctx, derivations = item.rule, item.ctx, item.derivations
        else:
            self.stats[worker].items += 1
            ctx = self._context(worker)
            if isinstance(item, SpecializedItem):
                rule = item.rule
            elif isinstance(item, NonRecursiveItem):
                rule = self.rules[item.rule_id]
            else:
                raise TypeError("invalid work item type")
            derivations = self.start(item, ctx)
        pred = rule.head.pred
        for fact in derivations:
            resumption = Resumption(rule=rule, derivations=derivations, ctx=ctx) if self.suspend else None
            if self.on_derive(pred, fact, worker, resumption) and resumption is not None:
                return

    def run(self):
        self.pool.run([NonRecursiveItem(rule_id=rule_id) for rule_id in self.seeds])
        for worker, steals in enumerate(self.pool.steals):
            self.stats[worker].steals += steals


def run_stratum_eager(stratum: Stratum, db: Database, registry: FunctorRegistry,
                      sessions: Sequence[Optional[OracleSession]], stats: Sequence[WorkerStats], *, seed: int = 0,
                      suspend: bool = True, trace: Optional[list[tuple[str, Fact]]] = None):
    evaluator = EagerEvaluator(stratum=stratum, db=db, registry=registry, sessions=sessions, stats=stats,
                               seed=seed, suspend=suspend, trace=trace)
    evaluator.run()
    logger.info(f"stratum {stratum.index} {stratum.preds}: eager quiescent, "
                f"{sum(s.items for s in stats)} items so far, steals {evaluator.pool.steals}")
