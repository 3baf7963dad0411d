from typing import TYPE_CHECKING, Callable, Optional

from datalog_types import *
from .formula import make_conj, make_lit, make_true

if TYPE_CHECKING:
    from .oracle import OracleSession


class Functor:

    def __init__(self, *, name: str, arity: int, function: Callable[..., ValueId], needs_session: bool = False):
        self.name = name
        self.arity = arity
        self.function = function
        # called as function(session, *args)
        self.needs_session = needs_session

    def __repr__(self):
        return f"Functor(@{self.name}/{self.arity})"


class FunctorRegistry:
    """Functors by name. Filled at startup, read-only while engines run."""

    def __init__(self):
        self._functors: dict[str, Functor] = {}

    def register(self, functor: Functor):
        if functor.name in self._functors:
            raise FunctorError(f"functor @{functor.name} is already registered")
        self._functors[functor.name] = functor

    def get(self, name: str) -> Functor:
        functor = self._functors.get(name)
        if functor is None:
            raise FunctorError(f"unknown functor @{name}")
        return functor

    def arities(self) -> dict[str, int]:
        return {name: f.arity for name, f in self._functors.items()}

    def call(self, name: str, args: tuple[ValueId, ...], session: Optional["OracleSession"] = None) -> ValueId:
        functor = self.get(name)
        if len(args) != functor.arity:
            raise FunctorError(f"functor @{name} expects {functor.arity} arguments, got {len(args)}")
        if functor.needs_session:
            if session is None:
                raise FunctorError(f"functor @{name} needs an oracle session")
            return functor.function(session, *args)
        return functor.function(*args)

    def __contains__(self, name: str):
        return name in self._functors


def _int_arg(name: str, value: ValueId) -> int:
    v = resolve(value)
    if not isinstance(v, IntLit):
        raise FunctorError(f"@{name} expects an integer, got {v}")
    return v.value


def _checked_int(name: str, value: int) -> ValueId:
    try:
        return intern_int(value)
    except OverflowError:
        raise FunctorError(f"@{name} overflowed: {value}") from None


def _inc(x: ValueId) -> ValueId:
    return _checked_int("inc", _int_arg("inc", x) + 1)

def _add(x: ValueId, y: ValueId) -> ValueId:
    return _checked_int("add", _int_arg("add", x) + _int_arg("add", y))

def _lit(var: ValueId, sign: ValueId) -> ValueId:
    s = _int_arg("lit", sign)
    if s not in (0, 1):
        raise FunctorError(f"@lit sign must be 0 or 1, got {s}")
    return make_lit(_int_arg("lit", var), s)

def _is_sat(session: "OracleSession", formula: ValueId) -> ValueId:
    return session.is_sat(formula)


def default_registry() -> FunctorRegistry:
    registry = FunctorRegistry()
    registry.register(Functor(name="inc", arity=1, function=_inc))
    registry.register(Functor(name="add", arity=2, function=_add))
    registry.register(Functor(name="true", arity=0, function=make_true))
    registry.register(Functor(name="lit", arity=2, function=_lit))
    registry.register(Functor(name="conj", arity=2, function=make_conj))
    registry.register(Functor(name="is_sat", arity=1, function=_is_sat, needs_session=True))
    return registry
