import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from analysis.stratifier import Stratum
from datalog_types import *
from db import Database, Relation, TupleSlice, TupleSource, plan_indexes
from .evaluator import EvalContext, Fact, derive, profile
from .utils import delta_first_order, normalize_rule, recursive_occurrences

logger = logging.getLogger("engine")


class DeltaRule:
    """A rule with at most one recursive body atom reading the previous iteration's new tuples."""

    def __init__(self, *, rule: Rule, delta: Optional[int], order: tuple[int, ...]):
        self.rule = rule
        # index into rule.body, None for rules evaluated once
        self.delta = delta
        self.order = order
        self.body = tuple(rule.body[i] for i in order)

    @property
    def delta_position(self) -> Optional[int]:
        """Where the delta atom sits in evaluation order."""
        if self.delta is None:
            return None
        return self.order.index(self.delta)

    def __repr__(self):
        marks = [f"δ{atom}" if i == self.delta else str(atom) for i, atom in zip(self.order, self.body)]
        return f"DeltaRule#{self.rule.id}({self.rule.head} :- {', '.join(marks)})"


def rewrite_stratum(stratum: Stratum, delta_first: bool = False) -> list[DeltaRule]:
    delta_rules: list[DeltaRule] = []
    for rule in stratum.rules:
        rule = normalize_rule(rule)
        identity = tuple(range(len(rule.body)))
        occurrences = recursive_occurrences(rule, stratum.recursive_preds)
        if not occurrences:
            delta_rules.append(DeltaRule(rule=rule, delta=None, order=identity))
            continue
        for k in occurrences:
            order = (k, *identity[:k], *identity[k + 1:]) if delta_first else identity
            delta_rules.append(DeltaRule(rule=rule, delta=k, order=order))
    return delta_rules


class FixpointState:
    """Per recursive predicate: the previous iteration's new tuples and this iteration's."""

    def __init__(self, *, preds: Sequence[str], arities: dict[str, int], indexes: dict[str, set[tuple[int, ...]]]):
        self.preds = list(preds)
        self.arities = arities
        self.indexes = indexes
        self.iteration = 0
        self.delta_prev = self._empty()
        self.delta_next = self._empty()

    def _empty(self) -> dict[str, Relation]:
        return {
            pred: Relation(name=f"δ{pred}", arity=self.arities[pred], indexes=self.indexes.get(pred, ()))
            for pred in self.preds
        }

    def advance(self):
        self.delta_prev = self.delta_next
        self.delta_next = self._empty()
        self.iteration += 1

    def pending(self) -> int:
        return sum(len(r) for r in self.delta_next.values())


def _sources(delta_rule: DeltaRule, db: Database, delta: Optional[Relation]) -> list[Optional[TupleSource]]:
    sources: list[Optional[TupleSource]] = []
    position = delta_rule.delta_position
    for i, atom in enumerate(delta_rule.body):
        if i == position:
            sources.append(delta)
        elif isinstance(atom, Pos | Neg):
            sources.append(db.relation(atom.pred))
        else:
            sources.append(None)
    return sources


class SemiNaiveRunner:

    def __init__(self, *, stratum: Stratum, db: Database, contexts: Sequence[EvalContext], delta_first: bool,
                 trace: list[tuple[str, Fact]]):
        self.stratum = stratum
        self.db = db
        self.contexts = contexts
        self.delta_first = delta_first
        self.trace = trace
        self.delta_rules = rewrite_stratum(stratum, delta_first)
        plan = plan_indexes(d.body for d in self.delta_rules)
        db.add_indexes(plan)
        self.state = FixpointState(
            preds=stratum.preds, arities={p: db.relation(p).arity for p in stratum.preds}, indexes=plan,
        )

    def _emit(self, ctx: EvalContext, pred: str, fact: Fact):
        # full relations stay at their iteration-start contents until the iteration ends
        if not self.db.relation(pred).contains(fact) and self.state.delta_next[pred].add_if_absent(fact):
            ctx.stats.derived += 1
            self.trace.append((pred, fact))
        else:
            ctx.stats.rederived += 1

    def _evaluate(self, delta_rule: DeltaRule, sources: Sequence[Optional[TupleSource]], ctx: EvalContext):
        pred = delta_rule.rule.head.pred
        for fact in derive(delta_rule.rule, delta_rule.body, sources, ctx):
            self._emit(ctx, pred, fact)

    def _evaluate_partitioned(self, delta_rule: DeltaRule, sources: list[Optional[TupleSource]],
                              executor: ThreadPoolExecutor):
        """Splits the tuples matched by the outermost atom across workers."""
        first = delta_rule.body[0] if delta_rule.body else None
        source = sources[0] if sources else None
        if not isinstance(first, Pos) or source is None:
            self._evaluate(delta_rule, sources, self.contexts[0])
            return
        pattern = tuple(a.value if isinstance(a, Const) else None for a in first.args)
        outer = source.query(pattern)
        workers = len(self.contexts)
        futures = []
        for i in range(workers):
            part = outer[i::workers]
            if not part:
                continue
            sliced = [TupleSlice(name=source.name, arity=source.arity, tuples=part), *sources[1:]]
            futures.append(executor.submit(self._evaluate, delta_rule, sliced, self.contexts[i]))
        for future in futures:
            future.result()

    def _merge(self) -> int:
        added = 0
        for pred, delta in self.state.delta_next.items():
            full = self.db.relation(pred)
            for fact in delta.tuples():
                if full.add_if_absent(fact):
                    added += 1
        return added

    @profile
    def run(self) -> int:
        """Evaluates to fixpoint, returns the number of iterations."""
        executor = ThreadPoolExecutor(max_workers=len(self.contexts)) if len(self.contexts) > 1 else None
        try:
            while True:
                for delta_rule in self.delta_rules:
                    if self.state.iteration == 0:
                        if delta_rule.delta is not None:
                            continue
                        delta = None
                    else:
                        if delta_rule.delta is None:
                            continue
                        atom = delta_rule.rule.body[delta_rule.delta]
                        assert isinstance(atom, Pos)
                        delta = self.state.delta_prev[atom.pred]
                        if not len(delta):
                            continue
                    sources = _sources(delta_rule, self.db, delta)
                    if executor is None:
                        self._evaluate(delta_rule, sources, self.contexts[0])
                    else:
                        self._evaluate_partitioned(delta_rule, sources, executor)
                new = self.state.pending()
                logger.debug(f"stratum {self.stratum.index} iteration {self.state.iteration}: {new} new tuples")
                self._merge()
                self.state.advance()
                if not new or not self.stratum.recursive_preds:
                    return self.state.iteration
        finally:
            if executor is not None:
                executor.shutdown()


def run_stratum_seminaive(stratum: Stratum, db: Database, contexts: Sequence[EvalContext], *,
                          delta_first: bool = False, trace: Optional[list[tuple[str, Fact]]] = None) -> int:
    runner = SemiNaiveRunner(stratum=stratum, db=db, contexts=contexts, delta_first=delta_first,
                             trace=trace if trace is not None else [])
    iterations = runner.run()
    logger.info(f"stratum {stratum.index} {stratum.preds}: seminaive fixpoint after {iterations} iterations")
    return iterations


@profile
def run_stratum_naive(stratum: Stratum, db: Database, ctx: EvalContext, *,
                      trace: Optional[list[tuple[str, Fact]]] = None) -> int:
    """Re-evaluates every rule against the full relations until a round adds nothing."""
    rules = [normalize_rule(r) for r in stratum.rules]
    db.add_indexes(plan_indexes(r.body for r in rules))
    iterations = 0
    while True:
        iterations += 1
        buffered: dict[str, set[Fact]] = {pred: set() for pred in stratum.preds}
        new: list[tuple[str, Fact]] = []
        for rule in rules:
            sources: list[Optional[TupleSource]] = [
                db.relation(a.pred) if isinstance(a, Pos | Neg) else None for a in rule.body
            ]
            pred = rule.head.pred
            for fact in derive(rule, rule.body, sources, ctx):
                if db.relation(pred).contains(fact) or fact in buffered[pred]:
                    ctx.stats.rederived += 1
                    continue
                buffered[pred].add(fact)
                new.append((pred, fact))
        for pred, fact in new:
            db.relation(pred).add_if_absent(fact)
            ctx.stats.derived += 1
            if trace is not None:
                trace.append((pred, fact))
        logger.debug(f"stratum {stratum.index} round {iterations}: {len(new)} new tuples")
        if not new:
            break
    logger.info(f"stratum {stratum.index} {stratum.preds}: naive fixpoint after {iterations} rounds")
    return iterations


__all__ = ["DeltaRule", "FixpointState", "rewrite_stratum", "run_stratum_seminaive", "run_stratum_naive"]
