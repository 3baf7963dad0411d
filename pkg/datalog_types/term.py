from enum import IntEnum
from typing import Iterator, Optional

from .errors import SourceSpan
from .value import ValueId


class Term:

    class Type(IntEnum):
        Var = 0
        Const = 1
        FunctorCall = 2

    type: Type

    def vars(self) -> Iterator[str]:
        raise NotImplementedError

    def __str__(self):
        import syntax.printer
        return syntax.printer.print_term(self)

    def __repr__(self):
        return f"{self.__class__.__name__}({self})"


class Var(Term):
    __slots__ = ("name",)
    type = Term.Type.Var

    def __init__(self, *, name: str):
        self.name = name

    def vars(self) -> Iterator[str]:
        yield self.name

    def __eq__(self, other: object):
        return isinstance(other, Var) and self.name == other.name

    def __hash__(self):
        return hash((0, self.name))


class Const(Term):
    __slots__ = ("value",)
    type = Term.Type.Const

    def __init__(self, *, value: ValueId):
        self.value = value

    def vars(self) -> Iterator[str]:
        return iter(())

    def __eq__(self, other: object):
        return isinstance(other, Const) and self.value == other.value

    def __hash__(self):
        return hash((1, self.value))


class FunctorCall(Term):
    __slots__ = ("functor", "args")
    type = Term.Type.FunctorCall

    def __init__(self, *, functor: str, args: tuple[Term, ...] = ()):
        self.functor = functor
        self.args = tuple(args)

    def vars(self) -> Iterator[str]:
        for arg in self.args:
            yield from arg.vars()

    def __eq__(self, other: object):
        return isinstance(other, FunctorCall) and self.functor == other.functor and self.args == other.args

    def __hash__(self):
        return hash((2, self.functor, self.args))


class Atom:

    class Type(IntEnum):
        Pos = 0
        Neg = 1
        Eq = 2
        Neq = 3

    type: Type

    def vars(self) -> Iterator[str]:
        raise NotImplementedError

    def terms(self) -> tuple[Term, ...]:
        raise NotImplementedError

    def __str__(self):
        import syntax.printer
        return syntax.printer.print_atom(self)

    def __repr__(self):
        return f"{self.__class__.__name__}({self})"


class PredicateAtom(Atom):
    __slots__ = ("pred", "args")

    def __init__(self, *, pred: str, args: tuple[Term, ...] = ()):
        self.pred = pred
        self.args = tuple(args)

    def vars(self) -> Iterator[str]:
        for arg in self.args:
            yield from arg.vars()

    def terms(self) -> tuple[Term, ...]:
        return self.args

    def __eq__(self, other: object):
        return type(other) is type(self) and self.pred == other.pred and self.args == other.args  # type: ignore

    def __hash__(self):
        return hash((self.type, self.pred, self.args))


class Pos(PredicateAtom):
    type = Atom.Type.Pos


class Neg(PredicateAtom):
    type = Atom.Type.Neg


class CompareAtom(Atom):
    __slots__ = ("lhs", "rhs")

    def __init__(self, *, lhs: Term, rhs: Term):
        self.lhs = lhs
        self.rhs = rhs

    def vars(self) -> Iterator[str]:
        yield from self.lhs.vars()
        yield from self.rhs.vars()

    def terms(self) -> tuple[Term, ...]:
        return self.lhs, self.rhs

    def __eq__(self, other: object):
        return type(other) is type(self) and self.lhs == other.lhs and self.rhs == other.rhs  # type: ignore

    def __hash__(self):
        return hash((self.type, self.lhs, self.rhs))


class Eq(CompareAtom):
    type = Atom.Type.Eq


class Neq(CompareAtom):
    type = Atom.Type.Neq


class Rule:

    def __init__(self, *, head: Pos, body: tuple[Atom, ...] = (), id_: int, span: Optional[SourceSpan] = None):
        self.head = head
        self.body = tuple(body)
        self.id = id_
        self.span = span

    def body_preds(self) -> Iterator[tuple[str, bool]]:
        """(pred, negated) for every predicate atom of the body."""
        for atom in self.body:
            if isinstance(atom, Pos):
                yield atom.pred, False
            elif isinstance(atom, Neg):
                yield atom.pred, True

    def __eq__(self, other: object):
        if not isinstance(other, Rule):
            return False
        return self.head == other.head and self.body == other.body

    def __hash__(self):
        return hash((self.head, self.body))

    def __str__(self):
        import syntax.printer
        return syntax.printer.print_rule(self)

    def __repr__(self):
        return f"Rule#{self.id}({self})"


class Declaration:

    class Kind(IntEnum):
        Internal = 0
        Input = 1
        Output = 2

        def __str__(self):
            return self.name.lower()

    def __init__(self, *, name: str, arity: int, kind: Kind, index: int, span: Optional[SourceSpan] = None):
        self.name = name
        self.arity = arity
        self.kind = kind
        self.index = index
        self.span = span

    def __eq__(self, other: object):
        if not isinstance(other, Declaration):
            return False
        return (self.name, self.arity, self.kind) == (other.name, other.arity, other.kind)

    def __repr__(self):
        return f"Declaration({self.name}/{self.arity} {self.kind})"


class Program:

    def __init__(self, *, declarations: dict[str, Declaration], rules: list[Rule]):
        self.declarations = declarations
        self.rules = rules

    def arity(self, pred: str) -> int:
        return self.declarations[pred].arity

    def input_preds(self) -> list[str]:
        return [d.name for d in self.declarations.values() if d.kind == Declaration.Kind.Input]

    def output_preds(self) -> list[str]:
        return [d.name for d in self.declarations.values() if d.kind == Declaration.Kind.Output]

    def rule(self, id_: int) -> Rule:
        return self.rules[id_]

    def __str__(self):
        import syntax.printer
        return syntax.printer.print_program(self)
