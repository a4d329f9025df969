"""Solver soundness: fixed verdicts, a seeded differential against the
exhaustive oracle, determinism, and the budget behaviour."""

import itertools
import random

import pytest

from veritas.circuit import simulate
from veritas.cnf import Clause, CnfFormula, Literal, default_names
from veritas.corpus import DesignSpec, Family, generate_design
from veritas.encode import tseytin_encode
from veritas.equivalence import build_miter
from veritas.errors import ResourceLimit, TooLarge
from veritas.sat import brute_force_solve, check_model, solve


def formula(*clauses: tuple[int, ...], num_vars: int = 0) -> CnfFormula:
    nv = num_vars or max(abs(i) for cl in clauses for i in cl)
    return CnfFormula(tuple(Clause.of(*cl) for cl in clauses), nv, default_names(nv))


def random_3cnf(rng: random.Random) -> CnfFormula:
    nv = rng.randint(8, 16)
    nc = int(nv * rng.uniform(3.0, 5.5))
    clauses = []
    for _ in range(nc):
        vs = rng.sample(range(1, nv + 1), 3)
        clauses.append(Clause.of(*[v if rng.random() < 0.5 else -v for v in vs]))
    return CnfFormula(tuple(clauses), nv, default_names(nv))


class TestSolve:
    def test_contradictory_units_unsat(self):
        result, _ = solve(formula((1,), (-1,)))
        assert not result.satisfiable

    def test_forced_variable(self):
        result, _ = solve(formula((1, 2), (-1, 2)))
        assert result.satisfiable
        assert result.model[2] is True
        assert check_model(formula((1, 2), (-1, 2)), result.model)

    def test_empty_clause_list_all_false(self):
        result, _ = solve(CnfFormula((), 3, default_names(3)))
        assert result.satisfiable
        assert result.model == {1: False, 2: False, 3: False}

    def test_deterministic(self):
        f = random_3cnf(random.Random(5))
        first, stats1 = solve(f)
        second, stats2 = solve(f)
        assert first == second
        assert (stats1.decisions, stats1.conflicts) == (stats2.decisions, stats2.conflicts)

    def test_branching_tries_false_first(self):
        # vars 1 and 2 are unconstrained decisions (left false); the clause
        # then forces var 3 by propagation
        result, stats = solve(formula((1, 2, 3), num_vars=3))
        assert result.model == {1: False, 2: False, 3: True}
        assert stats.decisions == 2

    def test_stats_populated(self):
        _, stats = solve(random_3cnf(random.Random(11)))
        assert stats.decisions > 0
        assert stats.propagations >= 0

    def test_resource_limit(self):
        rng = random.Random(1)
        nv = 24
        clauses = []
        for _ in range(150):
            vs = rng.sample(range(1, nv + 1), 3)
            clauses.append(Clause.of(*[v if rng.random() < 0.5 else -v for v in vs]))
        hard = CnfFormula(tuple(clauses), nv, default_names(nv))
        with pytest.raises(ResourceLimit):
            solve(hard, conflict_budget=3)

    def test_miter_of_two_adder_variants_unsat(self):
        # independent cross-check by exhaustive simulation over all inputs
        left = generate_design(DesignSpec(Family.ADDER, 3, "ripple"))
        right = generate_design(DesignSpec(Family.ADDER, 3, "nand"))
        for bits in itertools.product([False, True], repeat=6):
            stimulus = dict(zip(left.inputs, bits))
            assert simulate(left, stimulus) == simulate(right, stimulus)
        recipe = build_miter(left, right)
        f = tseytin_encode(recipe.circuit)
        out_var = f.var_of()["miter_out"]
        forced = CnfFormula(
            f.clauses + (Clause((Literal(out_var),)),), f.num_vars, f.names, f.inputs, f.outputs)
        result, _ = solve(forced)
        assert not result.satisfiable


class TestBruteForce:
    def test_contradiction(self):
        assert not brute_force_solve(formula((1,), (-1,))).satisfiable

    def test_empty_clause_list_all_false(self):
        result = brute_force_solve(CnfFormula((), 2, default_names(2)))
        assert result.satisfiable
        assert result.model == {1: False, 2: False}

    def test_too_large(self):
        with pytest.raises(TooLarge):
            brute_force_solve(CnfFormula((), 25, default_names(25)))

    def test_first_model_is_lowest_assignment(self):
        result = brute_force_solve(formula((2,), num_vars=3))
        assert result.model == {1: False, 2: True, 3: False}


class TestDifferential:
    def test_seeded_3cnf_agreement(self):
        rng = random.Random(42)
        sat = unsat = 0
        for _ in range(150):
            f = random_3cnf(rng)
            mine, _ = solve(f)
            oracle = brute_force_solve(f)
            assert mine.satisfiable == oracle.satisfiable
            if mine.satisfiable:
                assert check_model(f, mine.model)
                sat += 1
            else:
                unsat += 1
        assert sat and unsat, "differential set should exercise both verdicts"
