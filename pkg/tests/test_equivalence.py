"""Miter construction, functional equivalence, and the structural matcher."""

import itertools
import random
from collections import Counter

import pytest

from veritas.circuit import Circuit, Gate, GateType, simulate
from veritas.cnf import Clause, CnfFormula, Literal
from veritas.corpus import DesignSpec, Family, generate_design
from veritas.encode import tseytin_encode
from veritas.equivalence import (
    DiagKind, apply_renaming, build_miter, check_circuit_equivalence,
    check_cnf_equivalence,
)
from veritas.errors import InterfaceMismatch, NotComparable


def and_circuit() -> Circuit:
    return Circuit("c", ("a", "b"), ("y",), (Gate(GateType.AND, ("a", "b"), "y"),))


def or_circuit() -> Circuit:
    return Circuit("c", ("a", "b"), ("y",), (Gate(GateType.OR, ("a", "b"), "y"),))


def permute_formula(f: CnfFormula, rng: random.Random, scramble_names: bool = False):
    """Renumber auxiliary variables by a random permutation, rotate literals
    inside clauses and shuffle the clause list; anchors stay put."""
    var_of = f.var_of()
    anchors = {var_of[n] for n in (*f.inputs, *f.outputs)}
    aux = [v for v in range(1, f.num_vars + 1) if v not in anchors]
    shuffled = aux[:]
    rng.shuffle(shuffled)
    perm = {v: v for v in anchors} | dict(zip(aux, shuffled))
    clauses = []
    for cl in f.clauses:
        lits = [Literal(perm[lit.var], lit.negated) for lit in cl.literals]
        k = rng.randrange(len(lits))
        clauses.append(Clause(tuple(lits[k:] + lits[:k])))
    rng.shuffle(clauses)
    names: list[str] = [""] * f.num_vars
    fresh = 0
    for v in range(1, f.num_vars + 1):
        if v in anchors or not scramble_names:
            names[perm[v] - 1] = f.name_of(v)
        else:
            fresh += 1
            names[perm[v] - 1] = f"w{fresh}"
    return CnfFormula(tuple(clauses), f.num_vars, tuple(names), f.inputs, f.outputs), perm


def golden_multiset(f: CnfFormula) -> Counter:
    return Counter(cl.sorted_key() for cl in f.clauses)


class TestBuildMiter:
    def test_self_miter_shape_and_zero_output(self):
        recipe = build_miter(and_circuit(), and_circuit())
        kinds = Counter(g.kind for g in recipe.circuit.gates)
        assert kinds == {GateType.AND: 2, GateType.XOR: 1}
        assert recipe.circuit.outputs == ("miter_out",)
        for bits in itertools.product([False, True], repeat=2):
            out = simulate(recipe.circuit, dict(zip(("a", "b"), bits)))
            assert out["miter_out"] is False

    def test_and_vs_or_differs_at_mixed_input(self):
        recipe = build_miter(and_circuit(), or_circuit())
        out = simulate(recipe.circuit, {"a": True, "b": False})
        assert out["miter_out"] is True

    def test_gate_count_formula(self):
        left = generate_design(DesignSpec(Family.ADDER, 2, "ripple"))
        right = generate_design(DesignSpec(Family.ADDER, 2, "nand"))
        recipe = build_miter(left, right)
        outputs = len(left.outputs)
        assert len(recipe.circuit.gates) == len(left.gates) + len(right.gates) + outputs + (outputs - 1)
        assert len(recipe.xor_nets) == outputs

    def test_mutated_adder_detected_by_exhaustive_simulation(self):
        c = generate_design(DesignSpec(Family.ADDER, 4, "ripple"))
        gates = list(c.gates)
        for i, g in enumerate(gates):
            if g.kind is GateType.XOR:
                gates[i] = Gate(GateType.XNOR, g.inputs, g.output)
                break
        mutated = Circuit(c.name, c.inputs, c.outputs, tuple(gates))
        recipe = build_miter(c, mutated)
        hit = False
        for bits in itertools.product([False, True], repeat=len(c.inputs)):
            out = simulate(recipe.circuit, dict(zip(c.inputs, bits)))
            hit = hit or out["miter_out"]
        assert hit

    def test_interface_mismatch(self):
        other = Circuit("c", ("a", "c"), ("y",), (Gate(GateType.AND, ("a", "c"), "y"),))
        with pytest.raises(InterfaceMismatch) as err:
            build_miter(and_circuit(), other)
        assert "b" in str(err.value) and "c" in str(err.value)


class TestCircuitEquivalence:
    def test_reflexive(self):
        c = generate_design(DesignSpec(Family.MUX, 4, "tree"))
        assert check_circuit_equivalence(c, c).equivalent

    def test_and_vs_or_counterexample(self):
        verdict = check_circuit_equivalence(and_circuit(), or_circuit())
        assert not verdict.equivalent
        stimulus = verdict.counterexample
        assert (stimulus["a"], stimulus["b"]) in ((True, False), (False, True))
        assert simulate(and_circuit(), stimulus) != simulate(or_circuit(), stimulus)
        assert verdict.outputs_left != verdict.outputs_right

    def test_variant_pair_equivalent(self):
        left = generate_design(DesignSpec(Family.SUBTRACTOR, 3, "ripple"))
        right = generate_design(DesignSpec(Family.SUBTRACTOR, 3, "nor"))
        assert check_circuit_equivalence(left, right).equivalent


class TestCnfEquivalence:
    def test_permuted_matches_with_identity_witness(self):
        f = tseytin_encode(generate_design(DesignSpec(Family.ADDER, 3, "ripple")))
        rng = random.Random(0)
        clauses = list(f.clauses)
        rng.shuffle(clauses)
        rotated = []
        for cl in clauses:
            lits = list(cl.literals)
            k = rng.randrange(len(lits))
            rotated.append(Clause(tuple(lits[k:] + lits[:k])))
        candidate = CnfFormula(tuple(rotated), f.num_vars, f.names, f.inputs, f.outputs)
        report = check_cnf_equivalence(candidate, f)
        assert report.match
        assert report.witness_renaming == {v: v for v in range(1, f.num_vars + 1)}

    def test_renumbered_aux_matches_with_permutation_witness(self):
        f = tseytin_encode(generate_design(DesignSpec(Family.MUX, 4, "tree")))
        rng = random.Random(1)
        candidate, perm = permute_formula(f, rng)
        report = check_cnf_equivalence(candidate, f)
        assert report.match
        inverse = {after: before for before, after in perm.items()}
        assert report.witness_renaming == inverse
        assert apply_renaming(candidate, report.witness_renaming) == golden_multiset(f)

    def test_scrambled_aux_names_still_match(self):
        f = tseytin_encode(generate_design(DesignSpec(Family.SUBTRACTOR, 3, "aoi")))
        candidate, _ = permute_formula(f, random.Random(2), scramble_names=True)
        report = check_cnf_equivalence(candidate, f)
        assert report.match
        assert apply_renaming(candidate, report.witness_renaming) == golden_multiset(f)

    def test_xor_xnor_swap_reports_gate_logic_diff(self):
        c = generate_design(DesignSpec(Family.ADDER, 4, "ripple"))
        golden = tseytin_encode(c)
        gates = list(c.gates)
        swapped_net = None
        for i, g in enumerate(gates):
            if g.kind is GateType.XOR:
                gates[i] = Gate(GateType.XNOR, g.inputs, g.output)
                swapped_net = g.output
                break
        candidate = tseytin_encode(Circuit(c.name, c.inputs, c.outputs, tuple(gates)))
        report = check_cnf_equivalence(candidate, golden)
        assert not report.match
        gate_diffs = [d for d in report.diagnostics if d.kind is DiagKind.GATE_LOGIC_DIFF]
        assert gate_diffs and swapped_net in gate_diffs[0].detail

    def test_deleted_clause_reports_count_first(self):
        f = tseytin_encode(generate_design(DesignSpec(Family.DECODER, 2, "tree")))
        candidate = CnfFormula(f.clauses[:-1], f.num_vars, f.names, f.inputs, f.outputs)
        report = check_cnf_equivalence(candidate, f)
        assert not report.match
        assert report.diagnostics[0].kind is DiagKind.CLAUSE_COUNT_DIFF
        assert f"expected {len(f.clauses)}" in report.diagnostics[0].detail

    def test_not_comparable_on_io_disagreement(self):
        f = tseytin_encode(and_circuit())
        renamed = CnfFormula(f.clauses, f.num_vars, ("a", "b", "z"), ("a", "b"), ("z",))
        with pytest.raises(NotComparable):
            check_cnf_equivalence(renamed, f)

    def test_aux_count_difference_reported(self):
        left = tseytin_encode(generate_design(DesignSpec(Family.ADDER, 2, "ripple")))
        right = tseytin_encode(generate_design(DesignSpec(Family.ADDER, 2, "nand")))
        report = check_cnf_equivalence(right, left)
        assert not report.match
        assert any(d.kind is DiagKind.UNMATCHED_AUX for d in report.diagnostics)

    def test_match_implies_functional_equivalence(self, grid_designs):
        # structural match must never contradict the semantic check
        rng = random.Random(9)
        specs = [s for s in grid_designs if s.width == 2][:4]
        for spec in specs:
            golden = tseytin_encode(grid_designs[spec])
            candidate, _ = permute_formula(golden, rng)
            assert check_cnf_equivalence(candidate, golden).match
