from typing import Iterable, Sequence

from datalog_types import *


def bound_columns_at(atom: PredicateAtom, bound: set[str]) -> tuple[int, ...]:
    return tuple(i for i, arg in enumerate(atom.args) if term_is_bound(arg, bound))


def plan_order(order: Sequence[Atom], bound: Iterable[str] = ()) -> list[tuple[str, tuple[int, ...]]]:
    """(pred, bound columns) for every positive atom access along one body order."""
    bound = set(bound)
    accesses: list[tuple[str, tuple[int, ...]]] = []
    for atom in order:
        if isinstance(atom, Pos):
            accesses.append((atom.pred, bound_columns_at(atom, bound)))
            bound.update(atom.vars())
        elif isinstance(atom, Eq):
            if isinstance(atom.lhs, Var) and term_is_bound(atom.rhs, bound):
                bound.add(atom.lhs.name)
    return accesses


def plan_indexes(orders: Iterable[Sequence[Atom]]) -> dict[str, set[tuple[int, ...]]]:
    """Bound-column sets each relation is queried with; () stands for a full scan on the primary index."""
    plan: dict[str, set[tuple[int, ...]]] = {}
    for order in orders:
        for pred, columns in plan_order(order):
            plan.setdefault(pred, set()).add(columns)
    return plan
