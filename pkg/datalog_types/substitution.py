from typing import Iterator, Mapping, Optional

from .term import *
from .value import ValueId


class Substitution(Mapping[str, ValueId]):
    """Partial map from variable names to values. Bindings are write-once."""

    def __init__(self, bindings: Optional[Mapping[str, ValueId]] = None):
        self._bindings: dict[str, ValueId] = dict(bindings) if bindings else {}

    def __getitem__(self, name: str) -> ValueId:
        return self._bindings[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self):
        return len(self._bindings)

    def bind(self, name: str, value: ValueId) -> bool:
        """Binds name, or checks the existing binding agrees. Returns False on conflict."""
        bound = self._bindings.get(name)
        if bound is None:
            self._bindings[name] = value
            return True
        return bound == value

    def copy(self):
        return Substitution(self._bindings)

    def __repr__(self):
        return "{" + ", ".join(f"{k}→{v}" for k, v in self._bindings.items()) + "}"


def apply(s: Mapping[str, ValueId], t: Term) -> Term:
    if isinstance(t, Var):
        value = s.get(t.name)
        if value is None:
            return t
        return Const(value=value)
    elif isinstance(t, Const):
        return t
    elif isinstance(t, FunctorCall):
        return FunctorCall(functor=t.functor, args=tuple(apply(s, a) for a in t.args))
    else:
        raise TypeError("invalid term type")


def apply_atom(s: Mapping[str, ValueId], atom: Atom) -> Atom:
    if isinstance(atom, Pos):
        return Pos(pred=atom.pred, args=tuple(apply(s, a) for a in atom.args))
    elif isinstance(atom, Neg):
        return Neg(pred=atom.pred, args=tuple(apply(s, a) for a in atom.args))
    elif isinstance(atom, Eq):
        return Eq(lhs=apply(s, atom.lhs), rhs=apply(s, atom.rhs))
    elif isinstance(atom, Neq):
        return Neq(lhs=apply(s, atom.lhs), rhs=apply(s, atom.rhs))
    else:
        raise TypeError("invalid atom type")


def apply_rule(s: Mapping[str, ValueId], rule: Rule) -> Rule:
    head = apply_atom(s, rule.head)
    if not isinstance(head, Pos):
        raise TypeError("invalid rule head")
    return Rule(head=head, body=tuple(apply_atom(s, a) for a in rule.body), id_=rule.id, span=rule.span)
