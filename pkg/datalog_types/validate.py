from enum import IntEnum
from typing import Mapping, Optional

from .errors import SourceSpan
from .term import *


class Diagnostic:

    class Type(IntEnum):
        UndeclaredPredicate = 0
        ArityMismatch = 1
        UnknownFunctor = 2
        FunctorArityMismatch = 3
        UnsafeVariable = 4
        InputInHead = 5

        def __str__(self):
            return self.name

    def __init__(self, type_: Type, *, rule_id: int, message: str, variable: Optional[str] = None,
                 atom: Optional[str] = None, span: Optional[SourceSpan] = None):
        self.type = type_
        self.rule_id = rule_id
        self.message = message
        self.variable = variable
        self.atom = atom
        self.span = span

    def __str__(self):
        where = f"{self.span}: " if self.span else ""
        return f"{where}rule #{self.rule_id}: {self.message}"

    def __repr__(self):
        return f"Diagnostic({self.type}, rule={self.rule_id}, variable={self.variable}, atom={self.atom})"


def term_is_bound(term: Term, bound: set[str]) -> bool:
    return all(v in bound for v in term.vars())


def _check_terms(rule: Rule, terms: tuple[Term, ...], functor_arities: Mapping[str, int],
                 diagnostics: list[Diagnostic], where: str):
    for term in terms:
        if isinstance(term, FunctorCall):
            arity = functor_arities.get(term.functor)
            if arity is None:
                diagnostics.append(Diagnostic(
                    Diagnostic.Type.UnknownFunctor, rule_id=rule.id, atom=where, span=rule.span,
                    message=f"unknown functor @{term.functor} in {where}",
                ))
            elif arity != len(term.args):
                diagnostics.append(Diagnostic(
                    Diagnostic.Type.FunctorArityMismatch, rule_id=rule.id, atom=where, span=rule.span,
                    message=f"functor @{term.functor} expects {arity} arguments, got {len(term.args)} in {where}",
                ))
            _check_terms(rule, term.args, functor_arities, diagnostics, where)


def _unsafe(rule: Rule, names: list[str], where: str, diagnostics: list[Diagnostic], bound: set[str]):
    # reported once, then treated as bound so one mistake yields one diagnostic
    for name in dict.fromkeys(names):
        bound.add(name)
        diagnostics.append(Diagnostic(
            Diagnostic.Type.UnsafeVariable, rule_id=rule.id, variable=name, atom=where, span=rule.span,
            message=f"unsafe: {name} unbound at {where}",
        ))


def _check_safety(rule: Rule, diagnostics: list[Diagnostic]):
    bound: set[str] = set()
    for atom in rule.body:
        where = str(atom)
        if isinstance(atom, Pos):
            nested = [v for a in atom.args if isinstance(a, FunctorCall) for v in a.vars() if v not in bound]
            _unsafe(rule, nested, where, diagnostics, bound)
            for arg in atom.args:
                if isinstance(arg, Var):
                    bound.add(arg.name)
        elif isinstance(atom, Neg | Neq):
            _unsafe(rule, [v for v in atom.vars() if v not in bound], where, diagnostics, bound)
        elif isinstance(atom, Eq):
            if isinstance(atom.lhs, Var) and atom.lhs.name not in bound and term_is_bound(atom.rhs, bound):
                bound.add(atom.lhs.name)
            else:
                _unsafe(rule, [v for v in atom.vars() if v not in bound], where, diagnostics, bound)
    _unsafe(rule, [v for v in rule.head.vars() if v not in bound], str(rule.head), diagnostics, bound)


def validate(p: Program, functor_arities: Mapping[str, int]) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    for rule in p.rules:
        atoms: list[Atom] = [rule.head, *rule.body]
        for atom in atoms:
            where = str(atom)
            if isinstance(atom, Pos | Neg):
                declaration = p.declarations.get(atom.pred)
                if declaration is None:
                    diagnostics.append(Diagnostic(
                        Diagnostic.Type.UndeclaredPredicate, rule_id=rule.id, atom=where, span=rule.span,
                        message=f"undeclared predicate {atom.pred}",
                    ))
                elif declaration.arity != len(atom.args):
                    diagnostics.append(Diagnostic(
                        Diagnostic.Type.ArityMismatch, rule_id=rule.id, atom=where, span=rule.span,
                        message=f"{atom.pred} declared with arity {declaration.arity}, used with {len(atom.args)}",
                    ))
            _check_terms(rule, atom.terms(), functor_arities, diagnostics, where)
        head_declaration = p.declarations.get(rule.head.pred)
        if head_declaration is not None and head_declaration.kind == Declaration.Kind.Input:
            diagnostics.append(Diagnostic(
                Diagnostic.Type.InputInHead, rule_id=rule.id, atom=str(rule.head), span=rule.span,
                message=f"input predicate {rule.head.pred} cannot appear in a rule head",
            ))
        _check_safety(rule, diagnostics)
    return diagnostics
