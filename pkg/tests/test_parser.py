import os

import pytest

from datalog_types import *
from programs import CORPUS, TC_LINEAR
from syntax import load_facts_dir, parse_facts, parse_program, print_program


def test_transitive_closure():
    program = parse_program(".decl edge(2) input .decl reach(2) output "
                            "reach(X,Y) :- edge(X,Y). reach(X,Z) :- edge(X,Y), reach(Y,Z).")
    assert len(program.rules) == 2
    assert program.input_preds() == ["edge"]
    assert program.output_preds() == ["reach"]
    assert [r.id for r in program.rules] == [0, 1]
    step = program.rules[1]
    assert step.head == Pos(pred="reach", args=(Var(name="X"), Var(name="Z")))
    assert step.body == (
        Pos(pred="edge", args=(Var(name="X"), Var(name="Y"))),
        Pos(pred="reach", args=(Var(name="Y"), Var(name="Z"))),
    )


def test_empty_program():
    program = parse_program("")
    assert program.declarations == {}
    assert program.rules == []
    assert parse_program("// nothing here\n/* at all */\n").rules == []


def test_literals():
    program = parse_program(
        ".decl p(1)\n.decl q(2)\n"
        "q(X, -3) :- p(X), !p(-3), X != 4, Y = @inc(X), p(Y).\n"
        "p(@true()).\n"
    )
    rule = program.rules[0]
    assert [a.type for a in rule.body] == [
        Atom.Type.Pos, Atom.Type.Neg, Atom.Type.Neq, Atom.Type.Eq, Atom.Type.Pos,
    ]
    assert rule.head.args[1] == Const(value=intern_int(-3))
    assert rule.body[3] == Eq(lhs=Var(name="Y"), rhs=FunctorCall(functor="inc", args=(Var(name="X"),)))
    assert program.rules[1].head.args == (FunctorCall(functor="true"),)
    assert program.declarations["q"].kind == Declaration.Kind.Internal


def test_declaration_order():
    program = parse_program(".decl b(1) output\n.decl a(1) input\n")
    assert [d.name for d in program.declarations.values()] == ["b", "a"]
    assert [d.index for d in program.declarations.values()] == [0, 1]


def test_missing_period_reports_end_of_input():
    with pytest.raises(ParseError) as e:
        parse_program(".decl p(1)\n.decl q(1)\np(X) :- q(X)", "prog.dl")
    assert e.value.span == SourceSpan(file="prog.dl", line=3, column=13)
    assert "end of input" in str(e.value)


def test_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse_program(".decl p(1)\np(X) :- , p(X).\n")
    assert e.value.span.line == 2
    assert e.value.span.column == 9


def test_duplicate_declaration():
    with pytest.raises(ParseError, match="duplicate declaration of p"):
        parse_program(".decl p(1)\n.decl p(2) output\n")


def test_undeclared_predicate():
    with pytest.raises(ParseError, match="undeclared predicate q") as e:
        parse_program(".decl p(1)\n\np(X) :- q(X).\n")
    assert e.value.span.line == 3


def test_constant_out_of_range():
    with pytest.raises(ParseError):
        parse_program(".decl p(1)\np(9223372036854775808).\n")


def test_round_trip(corpus_case):
    _, (text, _) = corpus_case
    program = parse_program(text)
    printed = print_program(program)
    reparsed = parse_program(printed)
    assert reparsed.rules == program.rules
    assert list(reparsed.declarations.values()) == list(program.declarations.values())
    assert print_program(reparsed) == printed


def test_printed_form():
    assert print_program(parse_program(TC_LINEAR)) == (
        ".decl edge(2) input\n"
        ".decl reach(2) output\n"
        "\n"
        "reach(X, Y) :- edge(X, Y).\n"
        "reach(X, Z) :- edge(X, Y), reach(Y, Z).\n"
    )


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 12


def test_parse_facts():
    assert parse_facts("edge", 2, "0\t1\n0\t2") == [(intern_int(0), intern_int(1)), (intern_int(0), intern_int(2))]
    assert parse_facts("edge", 2, "") == []
    assert parse_facts("edge", 2, "\n-1\t5\n\n") == [(intern_int(-1), intern_int(5))]


def test_parse_facts_errors():
    with pytest.raises(FactsError) as e:
        parse_facts("edge", 2, "0", "edge.facts")
    assert e.value.line == 1
    assert e.value.file == "edge.facts"
    with pytest.raises(FactsError) as e:
        parse_facts("edge", 2, "0\t1\n\n1\tx\n")
    assert e.value.line == 3


@pytest.mark.parametrize("field", ["1_0", "\u0663", " 7 ", "7 ", "+7", "0x1f", "1.0", "--1", "1e3"])
def test_parse_facts_accepts_plain_decimals_only(field):
    with pytest.raises(FactsError, match="not a decimal integer") as e:
        parse_facts("n", 1, f"1\n{field}\n")
    assert e.value.line == 2
    assert parse_facts("n", 1, "-0\n0042\n") == [(intern_int(0),), (intern_int(42),)]


def test_load_facts_dir(tmp_path, caplog):
    program = parse_program(".decl edge(2) input\n.decl node(1) input\n.decl out(1) output\n")
    with open(os.path.join(tmp_path, "edge.facts"), "w") as f:
        f.write("1\t2\n3\t4\n")
    facts = load_facts_dir(program, str(tmp_path))
    assert facts["edge"] == [(intern_int(1), intern_int(2)), (intern_int(3), intern_int(4))]
    assert facts["node"] == []
    assert "out" not in facts
    assert "no facts file for input node" in caplog.text
