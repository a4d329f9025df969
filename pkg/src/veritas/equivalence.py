"""Functional and structural equivalence checking.

Two routes, used for different questions:

* `check_circuit_equivalence` answers "do these netlists compute the same
  function" by building a miter (paired outputs XORed, differences OR-ed
  into one signal) and asking the SAT engine whether the difference signal
  can ever rise.

* `check_cnf_equivalence` answers "is this candidate encoding the same
  encoding as the golden one" up to clause reordering and renaming of
  auxiliary variables. Primary I/O variables are anchored by net name and
  never searched; the remaining variables are matched by iterative
  signature refinement plus a budgeted backtracking search, and the
  returned witness maps candidate variables onto golden ones.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .circuit import Circuit, Gate, GateType, require_valid, simulate
from .cnf import Clause, CnfFormula, Literal
from .encode import tseytin_encode
from .errors import InterfaceMismatch, NotComparable, SynthesisError
from .sat import solve

MATCH_EXTENSION_BUDGET = 1_000_000


# ---------------------------------------------------------------------------
# miter + functional equivalence

@dataclass(frozen=True)
class MiterRecipe:
    circuit: Circuit
    shared_inputs: tuple[str, ...]
    xor_nets: tuple[tuple[str, str], ...]   # (output name, difference net)
    output_net: str


def build_miter(c1: Circuit, c2: Circuit) -> MiterRecipe:
    """Compose two same-interface circuits into a single-output difference circuit."""
    require_valid(c1)
    require_valid(c2)
    missing_in = set(c1.inputs) ^ set(c2.inputs)
    missing_out = set(c1.outputs) ^ set(c2.outputs)
    if missing_in or missing_out:
        parts = []
        if missing_in:
            parts.append(f"inputs differ on {sorted(missing_in)}")
        if missing_out:
            parts.append(f"outputs differ on {sorted(missing_out)}")
        raise InterfaceMismatch("; ".join(parts))

    def relocate(c: Circuit, tag: str) -> tuple[list[Gate], dict[str, str]]:
        rename = {net: net for net in c.inputs}
        for g in c.gates:
            rename[g.output] = f"{tag}__{g.output}"
        gates = [
            Gate(g.kind, tuple(rename[n] for n in g.inputs), rename[g.output])
            for g in c.gates
        ]
        return gates, rename

    gates1, map1 = relocate(c1, "l")
    gates2, map2 = relocate(c2, "r")
    gates = gates1 + gates2

    diffs: list[str] = []
    xor_nets: list[tuple[str, str]] = []
    single = len(c1.outputs) == 1
    for out in c1.outputs:
        net = "miter_out" if single else f"diff__{out}"
        gates.append(Gate(GateType.XOR, (map1[out], map2[out]), net))
        diffs.append(net)
        xor_nets.append((out, net))

    # balanced OR reduction of the difference nets; the root is miter_out
    layer = 0
    while len(diffs) > 1:
        nxt: list[str] = []
        for i in range(0, len(diffs) - 1, 2):
            net = "miter_out" if len(diffs) == 2 else f"agg__{layer}_{i // 2}"
            gates.append(Gate(GateType.OR, (diffs[i], diffs[i + 1]), net))
            nxt.append(net)
        if len(diffs) % 2:
            nxt.append(diffs[-1])
        diffs = nxt
        layer += 1

    miter = Circuit(f"miter__{c1.name}__{c2.name}", tuple(c1.inputs), ("miter_out",), tuple(gates))
    require_valid(miter)
    return MiterRecipe(miter, tuple(c1.inputs), tuple(xor_nets), "miter_out")


@dataclass(frozen=True)
class EquivVerdict:
    equivalent: bool
    counterexample: dict[str, bool] | None = None
    outputs_left: dict[str, bool] | None = None
    outputs_right: dict[str, bool] | None = None


def check_circuit_equivalence(c1: Circuit, c2: Circuit) -> EquivVerdict:
    """Miter-SAT equivalence: UNSAT of (difference signal = 1) proves equality."""
    recipe = build_miter(c1, c2)
    formula = tseytin_encode(recipe.circuit)
    var_of = formula.var_of()
    forced = CnfFormula(
        formula.clauses + (Clause((Literal(var_of["miter_out"]),)),),
        formula.num_vars, formula.names, formula.inputs, formula.outputs,
    )
    result, _ = solve(forced)
    if not result.satisfiable:
        return EquivVerdict(True)
    assert result.model is not None
    stimulus = {net: result.model[var_of[net]] for net in recipe.shared_inputs}
    left = simulate(c1, stimulus)
    right = simulate(c2, stimulus)
    if left == right:
        raise AssertionError("miter model does not distinguish the circuits")
    return EquivVerdict(False, stimulus, left, right)


# ---------------------------------------------------------------------------
# structural CNF comparison

class DiagKind(Enum):
    CLAUSE_COUNT_DIFF = "ClauseCountDiff"
    GATE_LOGIC_DIFF = "GateLogicDiff"
    UNMATCHED_AUX = "UnmatchedAux"
    IO_SIGNATURE_DIFF = "IoSignatureDiff"


@dataclass(frozen=True)
class MatchDiagnostic:
    kind: DiagKind
    detail: str


@dataclass(frozen=True)
class CnfMatchReport:
    match: bool
    diagnostics: tuple[MatchDiagnostic, ...] = ()
    witness_renaming: dict[int, int] | None = None   # candidate var -> golden var


def _anchor_vars(f: CnfFormula) -> dict[str, int]:
    var_of = f.var_of()
    return {net: var_of[net] for net in (*f.inputs, *f.outputs)}


def _occurrences(f: CnfFormula) -> dict[int, list[tuple[int, bool]]]:
    occs: dict[int, list[tuple[int, bool]]] = {v: [] for v in range(1, f.num_vars + 1)}
    for ci, cl in enumerate(f.clauses):
        for lit in cl.literals:
            occs[lit.var].append((ci, lit.negated))
    return occs


def _refine_colors(cand: CnfFormula, gold: CnfFormula) -> tuple[dict[int, int], dict[int, int]]:
    """Joint signature refinement over both formulas.

    Anchors start with a color unique to their net name (shared across the
    two formulas); every other variable starts in one bucket. Rounds
    alternate clause colors (multiset of member colors with polarity) and
    variable colors (multiset of incident clause colors with polarity)
    until the partition stops splitting.
    """
    interner: dict[object, int] = {}

    def intern(key: object) -> int:
        if key not in interner:
            interner[key] = len(interner)
        return interner[key]

    sides = []
    for f in (cand, gold):
        anchors = {v: net for net, v in _anchor_vars(f).items()}
        color = {
            v: intern(("anchor", anchors[v])) if v in anchors else intern("aux")
            for v in range(1, f.num_vars + 1)
        }
        sides.append({"f": f, "color": color, "occs": _occurrences(f)})

    def palette_size() -> int:
        return len({c for side in sides for c in side["color"].values()})

    previous = -1
    for _ in range(cand.num_vars + gold.num_vars + 2):
        current = palette_size()
        if current == previous:
            break
        previous = current
        for side in sides:
            f, color = side["f"], side["color"]
            clause_color = [
                intern(tuple(sorted((color[lit.var], lit.negated) for lit in cl.literals)))
                for cl in f.clauses
            ]
            side["color"] = {
                v: intern((color[v], tuple(sorted((clause_color[ci], neg) for ci, neg in side["occs"][v]))))
                for v in range(1, f.num_vars + 1)
            }
    return sides[0]["color"], sides[1]["color"]


def _clause_key_under(cl: Clause, mapping: dict[int, int]) -> tuple[int, ...] | None:
    mapped = []
    for lit in cl.literals:
        target = mapping.get(lit.var)
        if target is None:
            return None
        mapped.append(-target if lit.negated else target)
    return tuple(sorted(mapped, key=lambda i: (abs(i), i < 0)))


def _search_bijection(
    cand: CnfFormula,
    gold: CnfFormula,
    colors_cand: dict[int, int],
    colors_gold: dict[int, int],
    base: dict[int, int],
    budget: int = MATCH_EXTENSION_BUDGET,
) -> dict[int, int] | None:
    """Backtracking extension of the anchor mapping over auxiliary variables."""
    cand_occs = _occurrences(cand)
    gold_count: Counter[tuple[int, ...]] = Counter(cl.sorted_key() for cl in gold.clauses)

    # remaining clause mapping obligations, tracked incrementally: for each
    # candidate clause, how many of its variables are still unmapped
    unmapped_in = [sum(1 for lit in cl.literals if lit.var not in base) for cl in cand.clauses]
    for ci, cl in enumerate(cand.clauses):
        if unmapped_in[ci] == 0:
            key = _clause_key_under(cl, base)
            if gold_count[key] <= 0:
                return None
            gold_count[key] -= 1

    taken = set(base.values())
    by_color: dict[int, list[int]] = {}
    for v in range(1, gold.num_vars + 1):
        if v not in taken:
            by_color.setdefault(colors_gold[v], []).append(v)
    free_cand = [v for v in range(1, cand.num_vars + 1) if v not in base]
    # smallest color classes first, then variable order; within a class the
    # same-named golden variable is tried first so unchanged encodings get
    # the identity witness
    free_cand.sort(key=lambda v: (len(by_color.get(colors_cand[v], ())), v))
    gold_name_to_var = gold.var_of()

    used_gold: set[int] = set()
    mapping = dict(base)
    extensions = [0]

    def candidates_for(v: int) -> list[int]:
        pool = [g for g in by_color.get(colors_cand[v], ()) if g not in used_gold]
        preferred = gold_name_to_var.get(cand.name_of(v))
        pool.sort(key=lambda g: (g != preferred, g))
        return pool

    def assign(v: int, g: int) -> list[tuple[int, ...]] | None:
        """Map v onto g; returns the consumed clause keys or None on failure."""
        mapping[v] = g
        used_gold.add(g)
        consumed: list[tuple[int, ...]] = []
        for ci, _neg in cand_occs[v]:
            unmapped_in[ci] -= 1
            if unmapped_in[ci] == 0:
                key = _clause_key_under(cand.clauses[ci], mapping)
                if gold_count[key] <= 0:
                    _undo(v, g, consumed, ci)
                    return None
                gold_count[key] -= 1
                consumed.append(key)
        return consumed

    def _undo(v: int, g: int, consumed: list[tuple[int, ...]], upto_ci: int | None = None) -> None:
        for key in consumed:
            gold_count[key] += 1
        for ci, _neg in cand_occs[v]:
            unmapped_in[ci] += 1
            if upto_ci is not None and ci == upto_ci:
                break
        del mapping[v]
        used_gold.discard(g)

    def backtrack(depth: int) -> bool:
        if depth == len(free_cand):
            return True
        v = free_cand[depth]
        for g in candidates_for(v):
            extensions[0] += 1
            if extensions[0] > budget:
                return False
            consumed = assign(v, g)
            if consumed is None:
                continue
            if backtrack(depth + 1):
                return True
            _undo(v, g, consumed)
        return False

    if backtrack(0):
        return mapping
    return None


def apply_renaming(f: CnfFormula, mapping: dict[int, int]) -> Counter:
    """Clause multiset of f with every variable renamed through mapping."""
    return Counter(_clause_key_under(cl, mapping) for cl in f.clauses)


def _gate_logic_diffs(cand: CnfFormula, gold: CnfFormula) -> list[MatchDiagnostic]:
    from .synthesis import IoHints, extract_circuit_from_cnf

    diffs: list[MatchDiagnostic] = []
    try:
        cand_circ = extract_circuit_from_cnf(cand, IoHints("cand", cand.inputs, cand.outputs))
        gold_circ = extract_circuit_from_cnf(gold, IoHints("gold", gold.inputs, gold.outputs))
    except SynthesisError:
        return diffs
    cand_gates = {g.output: g for g in cand_circ.gates}
    gold_gates = {g.output: g for g in gold_circ.gates}
    for net in sorted(set(cand_gates) & set(gold_gates)):
        cg, gg = cand_gates[net], gold_gates[net]
        if cg.kind != gg.kind or sorted(cg.inputs) != sorted(gg.inputs):
            diffs.append(MatchDiagnostic(
                DiagKind.GATE_LOGIC_DIFF,
                f"output net '{net}': candidate {cg.kind.value}({', '.join(cg.inputs)}) "
                f"vs golden {gg.kind.value}({', '.join(gg.inputs)})",
            ))
    return diffs


def _io_signature_diffs(cand: CnfFormula, gold: CnfFormula) -> list[MatchDiagnostic]:
    diffs = []
    cand_occ, gold_occ = _occurrences(cand), _occurrences(gold)
    cand_anchor, gold_anchor = _anchor_vars(cand), _anchor_vars(gold)
    for net in sorted(cand_anchor):
        cv, gv = cand_anchor[net], gold_anchor[net]
        cand_sig = sorted((len(cand.clauses[ci].literals), neg) for ci, neg in cand_occ[cv])
        gold_sig = sorted((len(gold.clauses[ci].literals), neg) for ci, neg in gold_occ[gv])
        if cand_sig != gold_sig:
            diffs.append(MatchDiagnostic(
                DiagKind.IO_SIGNATURE_DIFF,
                f"net '{net}' occurs as {cand_sig} in candidate but {gold_sig} in golden",
            ))
    return diffs


def check_cnf_equivalence(candidate: CnfFormula, golden: CnfFormula) -> CnfMatchReport:
    """Structural match of two encodings modulo clause order and aux naming."""
    cand_io = set(candidate.inputs) | set(candidate.outputs)
    gold_io = set(golden.inputs) | set(golden.outputs)
    if not gold_io or not cand_io:
        raise NotComparable("one of the formulas declares no primary I/O nets")
    if cand_io != gold_io:
        missing = sorted(gold_io - cand_io)
        extra = sorted(cand_io - gold_io)
        raise NotComparable(f"I/O nets disagree: missing {missing}, extra {extra}")

    diagnostics: list[MatchDiagnostic] = []
    if len(candidate.clauses) != len(golden.clauses):
        diagnostics.append(MatchDiagnostic(
            DiagKind.CLAUSE_COUNT_DIFF,
            f"expected {len(golden.clauses)} clauses, got {len(candidate.clauses)}",
        ))

    cand_anchor = _anchor_vars(candidate)
    gold_anchor = _anchor_vars(golden)
    anchor_map = {cand_anchor[net]: gold_anchor[net] for net in sorted(cand_io)}
    cand_aux = candidate.num_vars - len(anchor_map)
    gold_aux = golden.num_vars - len(anchor_map)
    if cand_aux != gold_aux:
        diagnostics.append(MatchDiagnostic(
            DiagKind.UNMATCHED_AUX,
            f"candidate has {cand_aux} auxiliary variables, golden has {gold_aux}",
        ))

    witness = None
    if not diagnostics:
        colors_cand, colors_gold = _refine_colors(candidate, golden)
        if Counter(colors_cand.values()) == Counter(colors_gold.values()):
            witness = _search_bijection(candidate, golden, colors_cand, colors_gold, anchor_map)

    if witness is not None:
        if apply_renaming(candidate, witness) != Counter(cl.sorted_key() for cl in golden.clauses):
            raise AssertionError("bijection search returned an unsound witness")
        return CnfMatchReport(True, (), witness)

    diagnostics.extend(_gate_logic_diffs(candidate, golden))
    diagnostics.extend(_io_signature_diffs(candidate, golden))
    if not diagnostics:
        diagnostics.append(MatchDiagnostic(
            DiagKind.UNMATCHED_AUX,
            "no auxiliary-variable bijection maps the candidate clauses onto the golden ones",
        ))
    return CnfMatchReport(False, tuple(diagnostics))
