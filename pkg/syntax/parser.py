from typing import Any

from lark.exceptions import LarkError, UnexpectedInput, UnexpectedToken, VisitError
from lark.lark import Lark
from lark.tree import Meta
from lark.visitors import Transformer, v_args

from datalog_types import *

grammar = r"""
start: item*

?item: decl
     | clause

decl: ".decl" NAME "(" INT ")" kind?
kind: INPUT | OUTPUT

clause: atom (":-" body)? "."
body: literal ("," literal)*

?literal: atom
        | "!" atom            -> neg
        | term "=" term       -> eq
        | term "!=" term      -> neq

atom: NAME "(" args? ")"
args: term ("," term)*

?term: VAR                    -> var
     | SIGNED_INT             -> const
     | "@" NAME "(" args? ")" -> functor_call

INPUT: "input"
OUTPUT: "output"
NAME: /[a-z][A-Za-z0-9_]*/
VAR: /[A-Z][A-Za-z0-9_]*/

%import common.INT
%import common.SIGNED_INT
%import common.WS
%import common.CPP_COMMENT
%import common.C_COMMENT
%ignore WS
%ignore CPP_COMMENT
%ignore C_COMMENT
"""

# no transformer attached: transformers keep per-parse state, the parser itself is shared
parser = Lark(grammar, parser="lalr", lexer="contextual", propagate_positions=True)


class _Decl:
    def __init__(self, name: str, arity: int, kind: Declaration.Kind, span: SourceSpan):
        self.name = name
        self.arity = arity
        self.kind = kind
        self.span = span


class _Clause:
    def __init__(self, head: Pos, body: tuple[Atom, ...], span: SourceSpan):
        self.head = head
        self.body = body
        self.span = span


@v_args(meta=True)
class ProgramTransformer(Transformer[Any, Any]):

    def __init__(self, file: str):
        super().__init__()
        self.file = file

    def _span(self, meta: Meta) -> SourceSpan:
        if meta.empty:
            return SourceSpan(file=self.file, line=1, column=1)
        return SourceSpan(file=self.file, line=meta.line, column=meta.column)

    def start(self, meta: Meta, children: list[Any]) -> list[Any]:
        return children

    def decl(self, meta: Meta, children: list[Any]) -> _Decl:
        name, arity = children[0], children[1]
        kind = children[2] if len(children) > 2 else Declaration.Kind.Internal
        return _Decl(str(name), int(arity), kind, self._span(meta))

    def kind(self, meta: Meta, children: list[Any]) -> Declaration.Kind:
        [token] = children
        if token.type == "INPUT":
            return Declaration.Kind.Input
        return Declaration.Kind.Output

    def clause(self, meta: Meta, children: list[Any]) -> _Clause:
        head = children[0]
        body: tuple[Atom, ...] = children[1] if len(children) > 1 else ()
        return _Clause(head, body, self._span(meta))

    def body(self, meta: Meta, children: list[Any]) -> tuple[Atom, ...]:
        return tuple(children)

    def atom(self, meta: Meta, children: list[Any]) -> Pos:
        args: tuple[Term, ...] = children[1] if len(children) > 1 else ()
        return Pos(pred=str(children[0]), args=args)

    def neg(self, meta: Meta, children: list[Any]) -> Neg:
        [atom] = children
        return Neg(pred=atom.pred, args=atom.args)

    def eq(self, meta: Meta, children: list[Any]) -> Eq:
        lhs, rhs = children
        return Eq(lhs=lhs, rhs=rhs)

    def neq(self, meta: Meta, children: list[Any]) -> Neq:
        lhs, rhs = children
        return Neq(lhs=lhs, rhs=rhs)

    def args(self, meta: Meta, children: list[Any]) -> tuple[Term, ...]:
        return tuple(children)

    def var(self, meta: Meta, children: list[Any]) -> Var:
        [token] = children
        return Var(name=str(token))

    def const(self, meta: Meta, children: list[Any]) -> Const:
        [token] = children
        try:
            return Const(value=intern_int(int(token)))
        except OverflowError as e:
            raise ParseError(str(e), self._span(meta)) from None

    def functor_call(self, meta: Meta, children: list[Any]) -> FunctorCall:
        args: tuple[Term, ...] = children[1] if len(children) > 1 else ()
        return FunctorCall(functor=str(children[0]), args=args)


def _end_span(text: str, file: str) -> SourceSpan:
    lines = text.split("\n")
    return SourceSpan(file=file, line=len(lines), column=len(lines[-1]) + 1)


def parse_program(text: str, file: str = "<input>") -> Program:
    """Parses a whole program. Rule ids follow source order starting at 0."""
    try:
        tree = parser.parse(text)
    except UnexpectedInput as e:
        if isinstance(e, UnexpectedToken) and e.token.type == "$END":
            raise ParseError("unexpected end of input", _end_span(text, file), e.get_context(text)) from None
        span = SourceSpan(file=file, line=e.line, column=e.column)
        raise ParseError(f"syntax error: {e.__class__.__name__}", span, e.get_context(text)) from None
    except LarkError as e:
        raise ParseError(f"syntax error: {e}", _end_span(text, file)) from None

    try:
        items: list[Any] = ProgramTransformer(file).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise

    declarations: dict[str, Declaration] = {}
    clauses: list[_Clause] = []
    for item in items:
        if isinstance(item, _Decl):
            if item.name in declarations:
                raise ParseError(f"duplicate declaration of {item.name}", item.span)
            declarations[item.name] = Declaration(
                name=item.name, arity=item.arity, kind=item.kind, index=len(declarations), span=item.span
            )
        else:
            clauses.append(item)

    rules: list[Rule] = []
    for clause in clauses:
        for atom in (clause.head, *clause.body):
            if isinstance(atom, Pos | Neg) and atom.pred not in declarations:
                raise ParseError(f"undeclared predicate {atom.pred}", clause.span)
        rules.append(Rule(head=clause.head, body=clause.body, id_=len(rules), span=clause.span))
    return Program(declarations=declarations, rules=rules)
