from typing import Iterable, Optional

from datalog_types import *

TRUE = "true"
LIT = "lit"
CONJ = "conj"


def make_true() -> ValueId:
    return intern_ctor(TRUE)

def make_lit(var: int, sign: int) -> ValueId:
    return intern_ctor(LIT, intern_int(var), intern_int(sign))

def make_conj(lhs: ValueId, rhs: ValueId) -> ValueId:
    return intern_ctor(CONJ, lhs, rhs)


def literal_parts(lit: ValueId) -> tuple[int, int]:
    value = resolve(lit)
    if not isinstance(value, Ctor) or value.symbol != LIT or len(value.args) != 2:
        raise OracleError(f"not a literal: {value}")
    var, sign = resolve(value.args[0]), resolve(value.args[1])
    if not isinstance(var, IntLit) or not isinstance(sign, IntLit) or sign.value not in (0, 1):
        raise OracleError(f"malformed literal: {value}")
    return var.value, sign.value


def flatten(formula: ValueId, memo: Optional[dict[ValueId, frozenset[ValueId]]] = None) -> frozenset[ValueId]:
    """The set of literal ids a formula conjoins. Raises OracleError on anything that is not a formula.

    memo maps already flattened formulas to their literals and receives this one.
    """
    if memo is None:
        memo = {}
    cached = memo.get(formula)
    if cached is not None:
        return cached
    literals: set[ValueId] = set()
    stack = [formula]
    while stack:
        id_ = stack.pop()
        done = memo.get(id_)
        if done is not None:
            literals |= done
            continue
        value = resolve(id_)
        if not isinstance(value, Ctor):
            raise OracleError(f"not a formula: {value}")
        if value.symbol == TRUE and not value.args:
            continue
        elif value.symbol == LIT:
            literal_parts(id_)
            literals.add(id_)
        elif value.symbol == CONJ and len(value.args) == 2:
            stack.extend(value.args)
        else:
            raise OracleError(f"not a formula: {value}")
    result = frozenset(literals)
    memo[formula] = result
    return result


def is_satisfiable(literals: Iterable[ValueId]) -> bool:
    """Literals are propositional; a conjunction is unsatisfiable iff it holds some v and not v."""
    signs: dict[int, int] = {}
    for lit in literals:
        var, sign = literal_parts(lit)
        seen = signs.setdefault(var, sign)
        if seen != sign:
            return False
    return True

