import functools
import threading
from enum import IntEnum
from typing import NewType

from .errors import InternerError

ValueId = NewType("ValueId", int)

I64_MIN = -2 ** 63
I64_MAX = 2 ** 63 - 1

# ids of these integers follow numeric order
PREINTERNED_INTS = range(0, 1024)


class Value:

    class Type(IntEnum):
        IntLit = 0
        Ctor = 1

    type: Type


class IntLit(Value):
    __slots__ = ("value",)
    type = Value.Type.IntLit

    def __init__(self, *, value: int):
        if not I64_MIN <= value <= I64_MAX:
            raise OverflowError(f"value {value} out of range for a 64-bit integer")
        self.value = value

    def __eq__(self, other: object):
        if not isinstance(other, IntLit):
            return False
        return self.value == other.value

    def __hash__(self):
        return hash((0, self.value))

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"IntLit({self.value})"


class Ctor(Value):
    __slots__ = ("symbol", "args")
    type = Value.Type.Ctor

    def __init__(self, *, symbol: str, args: tuple[ValueId, ...] = ()):
        self.symbol = symbol
        self.args = tuple(args)

    def __eq__(self, other: object):
        if not isinstance(other, Ctor):
            return False
        return self.symbol == other.symbol and self.args == other.args

    def __hash__(self):
        return hash((1, self.symbol, self.args))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Ctor({self.symbol}, {list(self.args)})"


class Interner:
    """Hash-consing table: one id per structurally distinct value.

    Reads go through the dict without locking; misses take the lock so concurrent
    interning of the same value hands out a single id.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._ids: dict[Value, ValueId] = {}
        self._values: list[Value] = []
        for i in PREINTERNED_INTS:
            self.intern(IntLit(value=i))

    def intern(self, value: Value) -> ValueId:
        id_ = self._ids.get(value)
        if id_ is not None:
            return id_
        with self._lock:
            id_ = self._ids.get(value)
            if id_ is not None:
                return id_
            if isinstance(value, Ctor):
                for arg in value.args:
                    if not 0 <= arg < len(self._values):
                        raise InternerError(f"constructor {value.symbol} refers to unknown id {arg}")
            id_ = ValueId(len(self._values))
            self._values.append(value)
            self._ids[value] = id_
            return id_

    def resolve(self, id_: ValueId) -> Value:
        if id_ < 0:
            raise InternerError(f"unknown value id {id_}")
        try:
            return self._values[id_]
        except IndexError:
            raise InternerError(f"unknown value id {id_}") from None

    def __len__(self):
        return len(self._values)


interner = Interner()


def intern(value: Value) -> ValueId:
    return interner.intern(value)


def resolve(id_: ValueId) -> Value:
    return interner.resolve(id_)


def intern_int(value: int) -> ValueId:
    return interner.intern(IntLit(value=value))


def intern_ctor(symbol: str, *args: ValueId) -> ValueId:
    return interner.intern(Ctor(symbol=symbol, args=args))


# marks an arity comparison on the compare_values stack; real ids are never negative
_ARITY = -1


def compare_values(a: ValueId, b: ValueId) -> int:
    """Canonical order: integers numerically, then constructed values by symbol, then by arguments
    left to right with a prefix before its extensions. Walks both values with an explicit stack."""
    stack: list[tuple[int, int]] = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x == _ARITY:
            if y:
                return -1 if y < 0 else 1
            continue
        if x == y:
            continue
        vx, vy = resolve(ValueId(x)), resolve(ValueId(y))
        if isinstance(vx, IntLit):
            if isinstance(vy, IntLit):
                return -1 if vx.value < vy.value else 1
            return -1
        elif isinstance(vx, Ctor):
            if not isinstance(vy, Ctor):
                return 1
            if vx.symbol != vy.symbol:
                return -1 if vx.symbol < vy.symbol else 1
            stack.append((_ARITY, len(vx.args) - len(vy.args)))
            stack.extend(reversed(list(zip(vx.args, vy.args))))
        else:
            raise TypeError("invalid value type")
    return 0


def compare_tuples(a: tuple[ValueId, ...], b: tuple[ValueId, ...]) -> int:
    for x, y in zip(a, b):
        order = compare_values(x, y)
        if order:
            return order
    return (len(a) > len(b)) - (len(a) < len(b))


tuple_sort_key = functools.cmp_to_key(compare_tuples)


def render(value: Value, prefix: str = "") -> str:
    """Text of a value, constructors written as `<prefix>symbol(args)`; nesting depth is unbounded."""
    out: list[str] = []
    stack: list[Value | str] = [value]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, IntLit):
            out.append(str(item.value))
        elif isinstance(item, Ctor):
            out.append(f"{prefix}{item.symbol}(")
            stack.append(")")
            for i in reversed(range(len(item.args))):
                stack.append(resolve(item.args[i]))
                if i:
                    stack.append(", ")
        else:
            raise TypeError("invalid value type")
    return "".join(out)
