"""Encoder correctness: per-gate templates against truth tables (the
authoritative check), fixed encodings, PLF conversion and token counts."""

import itertools

import pytest

from veritas.circuit import Circuit, Gate, GateType, gate_function, simulate
from veritas.cnf import dimacs_clause_text
from veritas.corpus import DesignSpec, Family, generate_design
from veritas.encode import (
    GATE_CLAUSE_COUNTS, GATE_TEMPLATES, count_tokens, plf_encode, plf_to_cnf,
    tseytin_encode,
)
from veritas.errors import InvalidCircuit, MalformedPlf
from veritas.plf import Atom, Iff, Implies, Not, PlfDocument, PlfEntry, emit_plf, parse_plf
from veritas.sat import satisfying_mask

from conftest import full_adder

BINARY = [GateType.AND, GateType.NAND, GateType.OR, GateType.NOR, GateType.XOR, GateType.XNOR]
UNARY = [GateType.NOT, GateType.BUF]


def template_satisfied(kind: GateType, values: dict[int, bool]) -> bool:
    """Evaluate the raw clause template on slot values {1: A, 2: B, last: Y}."""
    return all(
        any(values[abs(s)] == (s > 0) for s in row)
        for row in GATE_TEMPLATES[kind]
    )


class TestGateTemplates:
    @pytest.mark.parametrize("kind", BINARY + UNARY)
    def test_satisfied_iff_output_matches_function(self, kind):
        arity = kind.arity
        for bits in itertools.product([False, True], repeat=arity + 1):
            values = {i + 1: bits[i] for i in range(arity + 1)}
            inputs, output = bits[:arity], bits[arity]
            expected = gate_function(kind, inputs) == output
            assert template_satisfied(kind, values) is expected, (kind, bits)

    def test_clause_counts(self):
        expected = {
            GateType.AND: 3, GateType.NAND: 3, GateType.OR: 3, GateType.NOR: 3,
            GateType.BUF: 2, GateType.NOT: 2, GateType.XOR: 4, GateType.XNOR: 4,
        }
        assert GATE_CLAUSE_COUNTS == expected

    def test_single_formula_reduction_percentages(self):
        expected = {
            GateType.AND: 66.67, GateType.NAND: 66.67, GateType.OR: 66.67,
            GateType.NOR: 66.67, GateType.BUF: 50.0, GateType.NOT: 50.0,
            GateType.XOR: 75.0, GateType.XNOR: 75.0,
        }
        for kind, count in GATE_CLAUSE_COUNTS.items():
            reduction = round((count - 1) / count * 100, 2)
            assert reduction == expected[kind], kind


def single_gate(kind: GateType) -> Circuit:
    inputs = ("A",) if kind.arity == 1 else ("A", "B")
    return Circuit("g", inputs, ("Y",), (Gate(kind, inputs, "Y"),))


class TestTseytinEncode:
    def test_single_xor_is_the_canonical_four_clause_set(self):
        c = Circuit("g", ("A", "B"), ("X",), (Gate(GateType.XOR, ("A", "B"), "X"),))
        f = tseytin_encode(c)
        assert sorted(cl.sorted_key() for cl in f.clauses) == sorted([
            (-1, -2, -3), (1, 2, -3), (1, -2, 3), (-1, 2, 3),
        ])

    def test_single_buf(self):
        f = tseytin_encode(single_gate(GateType.BUF))
        assert sorted(cl.sorted_key() for cl in f.clauses) == sorted([(1, -2), (-1, 2)])

    def test_variable_numbering_inputs_first_then_topo(self):
        f = tseytin_encode(full_adder())
        assert f.names[:3] == ("a", "b", "cin")
        assert set(f.names[3:]) == {"g", "p", "sum", "t", "cout"}
        assert f.inputs == ("a", "b", "cin")
        assert f.outputs == ("sum", "cout")

    def test_clause_count_is_sum_of_templates(self):
        c = generate_design(DesignSpec(Family.ADDER, 2, "ripple"))
        f = tseytin_encode(c)
        assert len(f.clauses) == sum(GATE_CLAUSE_COUNTS[g.kind] for g in c.gates)

    def test_invalid_circuit_rejected(self):
        c = Circuit("c", ("a",), ("y",), (Gate(GateType.AND, ("a", "ghost"), "y"),))
        with pytest.raises(InvalidCircuit):
            tseytin_encode(c)

    def test_adder2_satisfying_assignments_project_onto_simulation(self):
        # brute force over every assignment of every variable: the CNF must
        # be satisfied exactly by the consistent circuit executions
        c = generate_design(DesignSpec(Family.ADDER, 2, "ripple"))
        f = tseytin_encode(c)
        mask = satisfying_mask(f)
        var_of = f.var_of()
        assert int(mask.sum()) == 2 ** len(c.inputs)
        for index in range(len(mask)):
            if not mask[index]:
                continue
            stimulus = {net: bool((index >> (var_of[net] - 1)) & 1) for net in c.inputs}
            expected = simulate(c, stimulus)
            for net, value in expected.items():
                assert bool((index >> (var_of[net] - 1)) & 1) == value


class TestPlfEncode:
    def test_single_xor_entry_matches_fixed_shape(self):
        c = Circuit("g", ("A", "B"), ("X",), (Gate(GateType.XOR, ("A", "B"), "X"),))
        doc = plf_encode(c)
        assert doc.entries == (PlfEntry("X", Not(Iff(Atom("A"), Atom("B")))),)
        assert emit_plf(doc).splitlines()[-1] == "X <-> ~(A <-> B)"

    def test_single_buf_entry(self):
        doc = plf_encode(single_gate(GateType.BUF))
        assert doc.entries == (PlfEntry("Y", Atom("A")),)

    @pytest.mark.parametrize("kind,text", [
        (GateType.AND, "Y <-> A & B"),
        (GateType.NAND, "Y <-> ~(A & B)"),
        (GateType.OR, "Y <-> A | B"),
        (GateType.NOR, "Y <-> ~(A | B)"),
        (GateType.XNOR, "Y <-> (A <-> B)"),
        (GateType.NOT, "Y <-> ~A"),
    ])
    def test_entry_shapes(self, kind, text):
        doc = plf_encode(single_gate(kind))
        assert emit_plf(doc).splitlines()[-1] == text

    def test_one_entry_per_gate(self, grid_designs):
        for spec, circuit in grid_designs.items():
            assert len(plf_encode(circuit).entries) == len(circuit.gates)


class TestPlfToCnf:
    def test_equals_tseytin_on_designs(self, grid_designs):
        for spec, circuit in grid_designs.items():
            assert plf_to_cnf(plf_encode(circuit)) == tseytin_encode(circuit)

    def test_eq1_gives_eq2(self):
        doc = parse_plf("# inputs: A B\n# outputs: X\nX <-> ~(A <-> B)\n")
        f = plf_to_cnf(doc)
        assert sorted(cl.sorted_key() for cl in f.clauses) == sorted([
            (-1, -2, -3), (1, 2, -3), (1, -2, 3), (-1, 2, 3),
        ])

    def test_implication_entry_equisatisfiable_with_disjunction(self):
        # Y <-> (A -> B) against its disjunctive truth table, by brute force
        # over the primaries and any auxiliaries
        doc = PlfDocument(
            (PlfEntry("Y", Implies(Atom("A"), Atom("B"))),), ("A", "B"), ("Y",))
        f = plf_to_cnf(doc)
        mask = satisfying_mask(f)
        var_of = f.var_of()
        seen = set()
        for index in range(len(mask)):
            if mask[index]:
                a = bool((index >> (var_of["A"] - 1)) & 1)
                b = bool((index >> (var_of["B"] - 1)) & 1)
                y = bool((index >> (var_of["Y"] - 1)) & 1)
                assert y == ((not a) or b)
                seen.add((a, b))
        assert seen == {(False, False), (False, True), (True, False), (True, True)}

    def test_nested_expression_gets_auxiliaries(self):
        from veritas.plf import And, Or
        doc = PlfDocument(
            (PlfEntry("Y", Or(And(Atom("A"), Atom("B")), Atom("C"))),),
            ("A", "B", "C"), ("Y",))
        f = plf_to_cnf(doc)
        assert "_t1" in f.names
        mask = satisfying_mask(f)
        var_of = f.var_of()
        for index in range(len(mask)):
            if mask[index]:
                a, b, c, y = (bool((index >> (var_of[n] - 1)) & 1) for n in "ABCY")
                assert y == ((a and b) or c)

    def test_unknown_atom_rejected(self):
        doc = PlfDocument((PlfEntry("Y", Atom("ghost")),), ("A",), ("Y",))
        with pytest.raises(MalformedPlf):
            plf_to_cnf(doc)


class TestTokenCount:
    def test_fixed_entry_count(self):
        # X, <->, ~, (, A, <->, B, ) under the lex-v1 rule
        assert count_tokens("X <-> ~(A <-> B)").count == 8

    def test_empty(self):
        assert count_tokens("").count == 0

    def test_signed_integers(self):
        assert count_tokens("1 -2 0").count == 3

    def test_identifier_runs(self):
        assert count_tokens("sum_0_ <-> ~(a_0_ <-> b_0_)").count == 8

    def test_tokenizer_id(self):
        assert count_tokens("x").tokenizer_id == "lex-v1"

    def test_adder5_clause_text_costs_more_than_plf(self):
        c = generate_design(DesignSpec(Family.ADDER, 5, "ripple"))
        plf_tokens = count_tokens(emit_plf(plf_encode(c))).count
        clause_tokens = count_tokens(dimacs_clause_text(tseytin_encode(c))).count
        assert clause_tokens / plf_tokens > 1.5
