"""Round trips and error paths of the four text formats."""

import pytest

from veritas.bench import emit_bench, parse_bench
from veritas.circuit import Circuit, Gate, GateType
from veritas.cnf import Clause, CnfFormula, default_names, emit_dimacs, parse_dimacs
from veritas.errors import MalformedPlf, ParseError, UnknownGate, UnsupportedConstruct
from veritas.plf import (
    And, Atom, Iff, Implies, Not, Or, PlfDocument, PlfEntry, emit_plf, format_node,
    parse_plf,
)
from veritas.verilog import emit_verilog, parse_structural_verilog

from conftest import full_adder


class TestBench:
    def test_minimal_parse(self):
        c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n")
        assert c.inputs == ("a", "b")
        assert c.outputs == ("y",)
        assert c.gates == (Gate(GateType.AND, ("a", "b"), "y"),)

    def test_round_trip_is_identity(self):
        c = full_adder()
        text = emit_bench(c)
        assert parse_bench(text) == c
        assert emit_bench(parse_bench(text)) == text

    def test_buf_alias_and_canonical_buff(self):
        c = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUF(a)\n")
        assert c.gates[0].kind is GateType.BUF
        assert "y = BUFF(a)" in emit_bench(c)

    def test_unknown_gate(self):
        with pytest.raises(UnknownGate):
            parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = MAJ(a,b,c)\n")

    def test_whitespace_and_comments(self):
        c = parse_bench("# a comment\nINPUT( a )\nOUTPUT( y )\n y =  NOT( a )  # trailing\n")
        assert c.gates == (Gate(GateType.NOT, ("a",), "y"),)

    def test_arity_error(self):
        with pytest.raises(ParseError):
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n")

    def test_malformed_line(self):
        with pytest.raises(ParseError) as err:
            parse_bench("INPUT(a)\nOUTPUT(y)\nwhat is this\n")
        assert err.value.line == 3

    def test_name_survives(self):
        c = full_adder()
        assert parse_bench(emit_bench(c)).name == "full_adder"


class TestVerilog:
    def test_single_gate_emission_layout(self):
        c = Circuit("c", ("a", "b"), ("y",), (Gate(GateType.AND, ("a", "b"), "y"),))
        assert emit_verilog(c) == (
            "module c(a, b, y);\n"
            "  input a, b;\n"
            "  output y;\n"
            "  and g0(y, a, b);\n"
            "endmodule\n"
        )

    def test_round_trip_is_identity(self):
        c = full_adder()
        assert parse_structural_verilog(emit_verilog(c)) == c

    def test_behavioral_rejected(self):
        text = "module c(a, y);\n  input a;\n  output y;\n  always @(*) y = a & b;\nendmodule\n"
        with pytest.raises(UnsupportedConstruct):
            parse_structural_verilog(text)

    def test_assign_rejected(self):
        text = "module c(a, y);\n  input a;\n  output y;\n  assign y = a;\nendmodule\n"
        with pytest.raises(UnsupportedConstruct):
            parse_structural_verilog(text)

    def test_unknown_primitive(self):
        text = "module c(a, b, y);\n  input a, b;\n  output y;\n  maj g0(y, a, b);\nendmodule\n"
        with pytest.raises(UnsupportedConstruct):
            parse_structural_verilog(text)

    def test_undeclared_net(self):
        text = "module c(a, y);\n  input a;\n  output y;\n  not g0(y, ghost);\nendmodule\n"
        with pytest.raises(ParseError):
            parse_structural_verilog(text)

    def test_line_comments_ignored(self):
        text = "// header\nmodule c(a, y);\n  input a;  // in\n  output y;\n  buf g0(y, a);\nendmodule\n"
        c = parse_structural_verilog(text)
        assert c.gates[0].kind is GateType.BUF

    def test_connection_count_checked(self):
        text = "module c(a, y);\n  input a;\n  output y;\n  not g0(y, a, a);\nendmodule\n"
        with pytest.raises(ParseError):
            parse_structural_verilog(text)


class TestDimacs:
    def test_minimal_emission(self):
        f = CnfFormula((Clause.of(1, -2),), 2, default_names(2))
        text = emit_dimacs(f)
        assert "p cnf 2 1\n1 -2 0\n" in text
        assert "c varmap 1 v1" in text and "c varmap 2 v2" in text

    def test_round_trip(self):
        f = CnfFormula(
            (Clause.of(1, -2, 3), Clause.of(-1, 2)), 3,
            ("a", "b", "y"), ("a", "b"), ("y",),
        )
        again = parse_dimacs(emit_dimacs(f))
        assert again == f
        assert emit_dimacs(again) == emit_dimacs(f)

    def test_missing_terminal_zero(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 2 1\n1 -2\n")

    def test_clause_count_mismatch(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 2 2\n1 -2 0\n")

    def test_clause_before_header(self):
        with pytest.raises(ParseError):
            parse_dimacs("1 -2 0\np cnf 2 1\n")

    def test_names_synthesized_without_varmap(self):
        f = parse_dimacs("p cnf 2 1\n1 -2 0\n")
        assert f.names == ("v1", "v2")

    def test_tautology_rejected(self):
        with pytest.raises(ParseError):
            parse_dimacs("p cnf 1 1\n1 -1 0\n")


class TestPlfText:
    def test_eq1_shape_parses(self):
        doc = parse_plf("X <-> ~(A <-> B)\n")
        assert doc.entries == (PlfEntry("X", Not(Iff(Atom("A"), Atom("B")))),)
        assert doc.inputs == ("A", "B")
        assert doc.outputs == ("X",)

    def test_entry_formula_is_iff_rooted(self):
        entry = parse_plf("y <-> a & b\n").entries[0]
        assert entry.formula == Iff(Atom("y"), And(Atom("a"), Atom("b")))

    def test_round_trip_with_directives(self):
        doc = PlfDocument(
            (PlfEntry("y", And(Atom("a"), Atom("b"))), PlfEntry("z", Not(Atom("y")))),
            ("a", "b"), ("z",),
        )
        text = emit_plf(doc)
        assert parse_plf(text) == doc
        assert emit_plf(parse_plf(text)) == text

    def test_unknown_operator(self):
        with pytest.raises(ParseError):
            parse_plf("X <- A\n")

    def test_trailing_tokens(self):
        with pytest.raises(ParseError):
            parse_plf("X <-> A B\n")

    def test_unbalanced_parens(self):
        with pytest.raises(ParseError):
            parse_plf("X <-> ~(A <-> B\n")

    def test_precedence_printing(self):
        node = Or(And(Atom("a"), Not(Atom("b"))), Implies(Atom("c"), Atom("d")))
        text = format_node(node)
        assert text == "a & ~b | (c -> d)"
        assert parse_plf(f"x <-> {text}\n").entries[0].rhs == node

    def test_left_associativity(self):
        rhs = parse_plf("x <-> a & b & c\n").entries[0].rhs
        assert rhs == And(And(Atom("a"), Atom("b")), Atom("c"))

    def test_duplicate_definition_rejected(self):
        with pytest.raises(MalformedPlf):
            parse_plf("# inputs: a\n# outputs: y\ny <-> a\ny <-> ~a\n")

    def test_comments_ignored(self):
        doc = parse_plf("# free-form note\nx <-> a | b\n")
        assert len(doc.entries) == 1
