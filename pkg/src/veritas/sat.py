"""Deterministic SAT solving for desk-scale equivalence checking.

`solve` is a small conflict-driven solver: unit propagation over
two-watched literals, first-UIP clause learning with non-chronological
backjumping, and a fixed branching rule (lowest-indexed unassigned
variable, tried false first). No restarts, no randomness, no clause
deletion, so a given formula always produces the same run, the same
verdict, and the same model.

`brute_force_solve` is the independent oracle: exhaustive enumeration
over all assignments (vectorized), usable up to 24 variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cnf import CnfFormula
from .errors import ResourceLimit, TooLarge

DEFAULT_CONFLICT_BUDGET = 10_000_000
BRUTE_FORCE_MAX_VARS = 24


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    model: dict[int, bool] | None = None


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0


def check_model(f: CnfFormula, model: dict[int, bool]) -> bool:
    return all(
        any(model[lit.var] != lit.negated for lit in cl.literals)
        for cl in f.clauses
    )


def solve(f: CnfFormula, conflict_budget: int = DEFAULT_CONFLICT_BUDGET) -> tuple[SatResult, SolverStats]:
    stats = SolverStats()
    nv = f.num_vars
    assign = [0] * (nv + 1)          # 0 unassigned, 1 true, -1 false
    level = [0] * (nv + 1)
    reason: list[list[int] | None] = [None] * (nv + 1)
    trail: list[int] = []
    trail_lim: list[int] = []
    watches: dict[int, list[list[int]]] = {l: [] for v in range(1, nv + 1) for l in (v, -v)}
    qhead = 0

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        return v if lit > 0 else -v

    def enqueue(lit: int, why: list[int] | None) -> None:
        var = abs(lit)
        assign[var] = 1 if lit > 0 else -1
        level[var] = len(trail_lim)
        reason[var] = why
        trail.append(lit)

    # load clauses; watch the first two literals of every non-unit clause
    for cl in f.clauses:
        ints = list(cl.as_ints())
        if len(ints) == 1:
            lit = ints[0]
            val = value(lit)
            if val == -1:
                return SatResult(False), stats
            if val == 0:
                enqueue(lit, None)
        else:
            watches[ints[0]].append(ints)
            watches[ints[1]].append(ints)

    def propagate() -> list[int] | None:
        nonlocal qhead
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            flit = -lit
            wl = watches[flit]
            watches[flit] = []
            kept = watches[flit]
            i, n = 0, len(wl)
            while i < n:
                clause = wl[i]
                i += 1
                if clause[0] == flit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if value(first) == 1:
                    kept.append(clause)
                    continue
                moved = False
                for j in range(2, len(clause)):
                    lj = clause[j]
                    if value(lj) != -1:
                        clause[1], clause[j] = lj, flit
                        watches[lj].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(clause)
                fv = value(first)
                if fv == 0:
                    stats.propagations += 1
                    enqueue(first, clause)
                elif fv == -1:
                    kept.extend(wl[i:])
                    return clause
        return None

    def analyze(conflict: list[int]) -> tuple[list[int], int]:
        """First-UIP learned clause plus the level to backjump to."""
        cur_level = len(trail_lim)
        seen = [False] * (nv + 1)
        lower: list[int] = []
        counter = 0
        clause = conflict
        skip_lit = 0
        idx = len(trail) - 1
        while True:
            for q in clause:
                if q == skip_lit:
                    continue
                var = abs(q)
                if not seen[var] and level[var] > 0:
                    seen[var] = True
                    if level[var] == cur_level:
                        counter += 1
                    else:
                        lower.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            uip_lit = trail[idx]
            idx -= 1
            var = abs(uip_lit)
            seen[var] = False
            counter -= 1
            if counter == 0:
                learned = [-uip_lit] + lower
                break
            clause = reason[var]  # type: ignore[assignment]
            skip_lit = uip_lit
        if len(learned) == 1:
            return learned, 0
        back = max(level[abs(q)] for q in learned[1:])
        return learned, back

    # all variables below branch_cursor are assigned; cancel_until lowers
    # the cursor to the smallest variable it unassigns
    branch_cursor = 1

    def cancel_until(lvl: int) -> None:
        nonlocal qhead, branch_cursor
        while len(trail_lim) > lvl:
            bound = trail_lim.pop()
            while len(trail) > bound:
                var = abs(trail.pop())
                assign[var] = 0
                reason[var] = None
                if var < branch_cursor:
                    branch_cursor = var
        qhead = len(trail)

    while True:
        conflict = propagate()
        if conflict is not None:
            stats.conflicts += 1
            if stats.conflicts > conflict_budget:
                raise ResourceLimit(stats.conflicts)
            if not trail_lim:
                return SatResult(False), stats
            learned, back = analyze(conflict)
            cancel_until(back)
            if len(learned) == 1:
                enqueue(learned[0], None)
            else:
                # watch the asserting literal and one literal from the
                # backjump level so the watch invariant holds immediately
                for j in range(1, len(learned)):
                    if level[abs(learned[j])] == back:
                        learned[1], learned[j] = learned[j], learned[1]
                        break
                watches[learned[0]].append(learned)
                watches[learned[1]].append(learned)
                enqueue(learned[0], learned)
            continue

        while branch_cursor <= nv and assign[branch_cursor] != 0:
            branch_cursor += 1
        branch_var = branch_cursor if branch_cursor <= nv else 0
        if branch_var == 0:
            model = {v: assign[v] == 1 for v in range(1, nv + 1)}
            if not check_model(f, model):
                raise AssertionError("solver produced a model that fails its own formula")
            return SatResult(True, model), stats
        stats.decisions += 1
        trail_lim.append(len(trail))
        enqueue(-branch_var, None)


def brute_force_solve(f: CnfFormula) -> SatResult:
    """Exhaustive oracle: scan all 2^n assignments in ascending integer order.

    Assignment i maps variable v to bit (v-1) of i, so the first satisfying
    assignment found is deterministic (all-false comes first).
    """
    if f.num_vars > BRUTE_FORCE_MAX_VARS:
        raise TooLarge(f"{f.num_vars} variables exceeds the {BRUTE_FORCE_MAX_VARS}-variable bound")
    nv = f.num_vars
    total = 1 << nv
    chunk = min(total, 1 << 20)
    for base in range(0, total, chunk):
        idx = np.arange(base, base + chunk, dtype=np.uint32)
        ok = np.ones(len(idx), dtype=bool)
        for cl in f.clauses:
            cl_ok = np.zeros(len(idx), dtype=bool)
            for lit in cl.literals:
                bit = (idx >> np.uint32(lit.var - 1)) & np.uint32(1)
                cl_ok |= (bit == 0) if lit.negated else (bit == 1)
            ok &= cl_ok
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if len(hits):
            first = int(idx[hits[0]])
            model = {v: bool((first >> (v - 1)) & 1) for v in range(1, nv + 1)}
            return SatResult(True, model)
    return SatResult(False)


def satisfying_mask(f: CnfFormula) -> np.ndarray:
    """Boolean vector over all 2^num_vars assignments (small formulas only).

    Entry i is True when assignment i (variable v = bit v-1 of i)
    satisfies every clause. Test-suite helper for equisatisfiability
    audits; bounded to 20 variables.
    """
    if f.num_vars > 20:
        raise TooLarge(f"{f.num_vars} variables is too many for a full mask")
    idx = np.arange(1 << f.num_vars, dtype=np.uint32)
    ok = np.ones(len(idx), dtype=bool)
    for cl in f.clauses:
        cl_ok = np.zeros(len(idx), dtype=bool)
        for lit in cl.literals:
            bit = (idx >> np.uint32(lit.var - 1)) & np.uint32(1)
            cl_ok |= (bit == 0) if lit.negated else (bit == 1)
        ok &= cl_ok
    return ok
