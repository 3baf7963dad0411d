from datalog_types import *


def print_value(value: ValueId) -> str:
    return render(resolve(value), "@")

def print_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    elif isinstance(term, Const):
        return print_value(term.value)
    elif isinstance(term, FunctorCall):
        return f"@{term.functor}({', '.join(print_term(a) for a in term.args)})"
    else:
        raise TypeError("invalid term type")

def print_atom(atom: Atom) -> str:
    if isinstance(atom, Pos):
        return f"{atom.pred}({', '.join(print_term(a) for a in atom.args)})"
    elif isinstance(atom, Neg):
        return f"!{atom.pred}({', '.join(print_term(a) for a in atom.args)})"
    elif isinstance(atom, Eq):
        return f"{print_term(atom.lhs)} = {print_term(atom.rhs)}"
    elif isinstance(atom, Neq):
        return f"{print_term(atom.lhs)} != {print_term(atom.rhs)}"
    else:
        raise TypeError("invalid atom type")

def print_rule(rule: Rule) -> str:
    if not rule.body:
        return f"{print_atom(rule.head)}."
    return f"{print_atom(rule.head)} :- {', '.join(print_atom(a) for a in rule.body)}."

def print_declaration(declaration: Declaration) -> str:
    kind = "" if declaration.kind == Declaration.Kind.Internal else f" {declaration.kind}"
    return f".decl {declaration.name}({declaration.arity}){kind}"

def print_tuple(tuple_: tuple[ValueId, ...]) -> str:
    return "\t".join(print_value(v) for v in tuple_)

def print_program(program: Program) -> str:
    lines: list[str] = []
    for declaration in program.declarations.values():
        lines.append(print_declaration(declaration))
    if program.declarations and program.rules:
        lines.append("")
    for rule in program.rules:
        lines.append(print_rule(rule))
    return "\n".join(lines) + "\n" if lines else ""
