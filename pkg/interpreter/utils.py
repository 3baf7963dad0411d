from datalog_types import *


def normalize_rule(rule: Rule) -> Rule:
    """Moves functor calls out of positive atoms.

    `p(@f(X))` becomes `_F0 = @f(X), p(_F0)`, so any body atom can be moved to the front
    without leaving a functor argument whose variables are not bound yet.
    """
    body: list[Atom] = []
    fresh = 0
    for atom in rule.body:
        if isinstance(atom, Pos) and any(isinstance(a, FunctorCall) for a in atom.args):
            args: list[Term] = []
            for arg in atom.args:
                if isinstance(arg, FunctorCall):
                    var = Var(name=f"_F{fresh}")
                    fresh += 1
                    body.append(Eq(lhs=var, rhs=arg))
                    args.append(var)
                else:
                    args.append(arg)
            body.append(Pos(pred=atom.pred, args=tuple(args)))
        else:
            body.append(atom)
    if fresh == 0:
        return rule
    return Rule(head=rule.head, body=tuple(body), id_=rule.id, span=rule.span)


def recursive_occurrences(rule: Rule, recursive_preds: set[str]) -> list[int]:
    return [i for i, atom in enumerate(rule.body) if isinstance(atom, Pos) and atom.pred in recursive_preds]


def delta_first_order(body: tuple[Atom, ...], k: int) -> tuple[Atom, ...]:
    return (body[k], *body[:k], *body[k + 1:])


def unify(atom: Pos, fact: tuple[ValueId, ...]) -> Substitution | None:
    """Matches a (normalized) positive atom against a ground fact."""
    if len(atom.args) != len(fact):
        return None
    s = Substitution()
    for arg, value in zip(atom.args, fact):
        if isinstance(arg, Var):
            if not s.bind(arg.name, value):
                return None
        elif isinstance(arg, Const):
            if arg.value != value:
                return None
        else:
            raise TypeError("functor call left in a positive atom")
    return s
