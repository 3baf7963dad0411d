import threading
from typing import Iterable, Iterator, Optional, Protocol

from sortedcontainers import SortedList

from datalog_types import *

Tuple = tuple[ValueId, ...]
# one entry per column, None for a free column
BoundPattern = tuple[Optional[ValueId], ...]


def bound_columns(pattern: BoundPattern) -> tuple[int, ...]:
    return tuple(i for i, v in enumerate(pattern) if v is not None)


def matches(pattern: BoundPattern, tuple_: Tuple) -> bool:
    return all(v is None or v == t for v, t in zip(pattern, tuple_))


class TupleSource(Protocol):
    name: str
    arity: int

    def query(self, pattern: BoundPattern) -> list[Tuple]: ...

    def contains(self, tuple_: Tuple) -> bool: ...


class Index:
    """Sorted keys ordered by the bound columns first, then the remaining columns."""

    def __init__(self, *, columns: tuple[int, ...], arity: int):
        self.columns = columns
        self.order = columns + tuple(c for c in range(arity) if c not in columns)
        self._inverse = tuple(self.order.index(c) for c in range(arity))
        self._keys: SortedList = SortedList()

    def key(self, tuple_: Tuple) -> Tuple:
        return tuple(tuple_[c] for c in self.order)

    def unkey(self, key: Tuple) -> Tuple:
        return tuple(key[i] for i in self._inverse)

    def insert(self, tuple_: Tuple):
        self._keys.add(self.key(tuple_))

    def scan(self, values: Tuple) -> list[Tuple]:
        if not values:
            keys: Iterable[Tuple] = self._keys
        else:
            stop = values[:-1] + (ValueId(values[-1] + 1),)
            keys = self._keys.irange(values, stop, inclusive=(True, False))
        return [self.unkey(k) for k in keys]

    def __len__(self):
        return len(self._keys)


class Relation:
    """Concurrent indexed tuple set.

    Every mutation and every read happens under one lock, so add_if_absent and query are
    linearizable; queries return a snapshot list.
    """

    def __init__(self, *, name: str, arity: int, indexes: Iterable[tuple[int, ...]] = ()):
        self.name = name
        self.arity = arity
        self._lock = threading.Lock()
        self._tuples: set[Tuple] = set()
        self._primary = Index(columns=tuple(range(arity)), arity=arity)
        self._indexes: dict[tuple[int, ...], Index] = {}
        for columns in indexes:
            self.add_index(columns)

    def _index_for(self, columns: tuple[int, ...]) -> Index:
        # callers hold the lock
        if columns == tuple(range(len(columns))):
            return self._primary
        index = self._indexes.get(columns)
        if index is None:
            index = Index(columns=columns, arity=self.arity)
            for tuple_ in self._tuples:
                index.insert(tuple_)
            self._indexes[columns] = index
        return index

    def add_index(self, columns: Iterable[int]):
        columns = tuple(sorted(set(columns)))
        if any(not 0 <= c < self.arity for c in columns):
            raise RelationError(f"index columns {columns} out of range for {self.name}/{self.arity}")
        with self._lock:
            self._index_for(columns)

    def index_columns(self) -> list[tuple[int, ...]]:
        with self._lock:
            return [self._primary.columns, *self._indexes]

    def add_if_absent(self, tuple_: Tuple) -> bool:
        if len(tuple_) != self.arity:
            raise RelationError(f"tuple {tuple_} does not fit {self.name}/{self.arity}")
        with self._lock:
            if tuple_ in self._tuples:
                return False
            self._tuples.add(tuple_)
            self._primary.insert(tuple_)
            for index in self._indexes.values():
                index.insert(tuple_)
            return True

    def contains(self, tuple_: Tuple) -> bool:
        with self._lock:
            return tuple_ in self._tuples

    def query(self, pattern: BoundPattern) -> list[Tuple]:
        if len(pattern) != self.arity:
            raise RelationError(f"pattern of length {len(pattern)} does not fit {self.name}/{self.arity}")
        columns = bound_columns(pattern)
        if self.arity > 0 and len(columns) == self.arity:
            tuple_ = tuple(v for v in pattern if v is not None)
            return [tuple_] if self.contains(tuple_) else []
        values = tuple(v for v in pattern if v is not None)
        with self._lock:
            return self._index_for(columns).scan(values)

    def index_contents(self) -> dict[tuple[int, ...], set[Tuple]]:
        """Tuples held by each index, decoded back to column order."""
        with self._lock:
            contents = {self._primary.columns: set(self._primary.scan(()))}
            for columns, index in self._indexes.items():
                contents[columns] = set(index.scan(()))
            return contents

    def tuples(self) -> list[Tuple]:
        with self._lock:
            return self._primary.scan(())

    def __len__(self):
        with self._lock:
            return len(self._tuples)

    def __iter__(self) -> Iterator[Tuple]:
        return iter(self.tuples())

    def __repr__(self):
        return f"Relation({self.name}/{self.arity}, {len(self)} tuples)"


class SingletonRelation:
    """Read-only relation holding exactly one fact."""

    def __init__(self, *, name: str, fact: Tuple):
        self.name = name
        self.arity = len(fact)
        self.fact = fact

    def query(self, pattern: BoundPattern) -> list[Tuple]:
        return [self.fact] if matches(pattern, self.fact) else []

    def contains(self, tuple_: Tuple) -> bool:
        return tuple_ == self.fact


class TupleSlice:
    """Read-only list of tuples, filtered by linear scan."""

    def __init__(self, *, name: str, arity: int, tuples: list[Tuple]):
        self.name = name
        self.arity = arity
        self._tuples = tuples

    def query(self, pattern: BoundPattern) -> list[Tuple]:
        return [t for t in self._tuples if matches(pattern, t)]

    def contains(self, tuple_: Tuple) -> bool:
        return tuple_ in self._tuples
