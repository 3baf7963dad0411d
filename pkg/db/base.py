import logging
import threading
from typing import Iterable

from datalog_types import *
from .relation import Relation

logger = logging.getLogger("db")


class DatabaseBase:

    def __init__(self, *, program: Program):
        self.program = program
        self._lock = threading.Lock()
        self.relations: dict[str, Relation] = {}
        for declaration in program.declarations.values():
            self.relations[declaration.name] = Relation(name=declaration.name, arity=declaration.arity)

    def relation(self, pred: str) -> Relation:
        try:
            return self.relations[pred]
        except KeyError:
            raise RelationError(f"no relation named {pred}") from None

    def add_indexes(self, plan: dict[str, set[tuple[int, ...]]]):
        for pred, column_sets in plan.items():
            relation = self.relation(pred)
            for columns in column_sets:
                relation.add_index(columns)

    def load(self, pred: str, tuples: Iterable[tuple[ValueId, ...]]) -> int:
        relation = self.relation(pred)
        added = 0
        for tuple_ in tuples:
            if relation.add_if_absent(tuple_):
                added += 1
        logger.debug(f"loaded {added} tuples into {pred}")
        return added

    def sizes(self) -> dict[str, int]:
        return {pred: len(relation) for pred, relation in self.relations.items()}
