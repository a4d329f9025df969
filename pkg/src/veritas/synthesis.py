"""Deterministic netlist reconstruction from encodings.

`plf_to_circuit` inverts the per-gate PLF shapes; `extract_circuit_from_cnf`
inverts the Tseytin templates by partitioning the clause set into per-gate
groups (every clause used exactly once, every non-input variable defined
exactly once). Both feed `synthesize_verilog`, and `stitch_top` flattens
verified parts into one top-level module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .circuit import (
    Circuit, Gate, GateType, NET_NAME_RE, canonical, require_valid, validate_circuit,
)
from .cnf import CnfFormula
from .encode import GATE_TEMPLATES, match_gate_shape
from .errors import (
    AmbiguousPattern, DanglingInput, InvalidCircuit, OutputMissing, PortCollision,
    ResidualClauses, UndrivenNet, UnrecognizedShape,
)
from .plf import PlfDocument, validate_document
from .verilog import emit_verilog


@dataclass(frozen=True)
class IoHints:
    """Interface declaration for encodings, which cannot carry it themselves."""
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        if not NET_NAME_RE.match(self.name or ""):
            raise ValueError(f"bad module name '{self.name}'")
        if not self.inputs or not self.outputs:
            raise ValueError("hints must declare at least one input and one output")
        names = (*self.inputs, *self.outputs)
        if len(set(names)) != len(names):
            raise ValueError("input and output names must be pairwise distinct")


def plf_to_circuit(doc: PlfDocument, hints: IoHints) -> Circuit:
    """One gate per entry; every entry must match a single-gate shape."""
    validate_document(doc)
    gates: list[Gate] = []
    defined: set[str] = set()
    for index, entry in enumerate(doc.entries):
        shape = match_gate_shape(entry.rhs)
        if shape is None:
            raise UnrecognizedShape(index, "right-hand side is not one of the 8 gate shapes")
        kind, operands = shape
        if entry.output in operands:
            raise UnrecognizedShape(index, f"entry output '{entry.output}' feeds itself")
        gates.append(Gate(kind, operands, entry.output))
        defined.add(entry.output)

    known = defined | set(hints.inputs)
    for g in gates:
        for net in g.inputs:
            if net not in known:
                raise UndrivenNet(net)
    for out in hints.outputs:
        if out not in defined:
            raise OutputMissing(out)

    circuit = Circuit(hints.name, tuple(hints.inputs), tuple(hints.outputs), tuple(gates))
    report = validate_circuit(circuit)
    if not report.ok:
        raise InvalidCircuit(report.violations)
    return canonical(circuit)


# ---------------------------------------------------------------------------
# CNF extraction

# Pattern table: for each gate kind, the clause rows with slot 0 = output,
# slots 1.. = inputs; rows are sign patterns over the slots. Derived from
# GATE_TEMPLATES by moving the output slot to the front.
def _pattern_rows(kind: GateType) -> tuple[tuple[tuple[int, int], ...], ...]:
    arity = kind.arity
    out_slot = arity + 1
    rows = []
    for row in GATE_TEMPLATES[kind]:
        rows.append(tuple(sorted(
            ((0 if abs(s) == out_slot else abs(s)), 1 if s > 0 else -1) for s in row
        )))
    return tuple(rows)


_PATTERNS: dict[GateType, tuple[tuple[tuple[int, int], ...], ...]] = {
    kind: _pattern_rows(kind) for kind in GateType
}

# resolution order: larger clause groups first, fixed kind order within a size
_KIND_ORDER = [
    GateType.XOR, GateType.XNOR,
    GateType.AND, GateType.NAND, GateType.OR, GateType.NOR,
    GateType.NOT, GateType.BUF,
]


def _template_keys(kind: GateType, operands: tuple[int, ...], output: int) -> list[tuple[int, ...]]:
    slots = (output, *operands)
    keys = []
    for row in _PATTERNS[kind]:
        lits = [slots[slot] * sign for slot, sign in row]
        keys.append(tuple(sorted(lits, key=lambda i: (abs(i), i < 0))))
    return keys


_AMBIGUITY_NODE_BUDGET = 200_000


def _candidate_matches(
    output: int,
    clause_count: dict[tuple[int, ...], int],
    neighbours: dict[int, set[int]],
) -> list[tuple[GateType, tuple[int, ...], list[tuple[int, ...]]]]:
    """All (kind, operand vars, clause keys) decompositions defining `output`.

    Every 2-input template is symmetric under operand swap, so operands
    are enumerated ascending only; the extracted gate carries them in
    ascending variable order.
    """
    matches = []
    others = sorted(neighbours.get(output, ()))
    for kind in _KIND_ORDER:
        if kind.arity == 2:
            for i, a in enumerate(others):
                for b in others[i + 1:]:
                    keys = _template_keys(kind, (a, b), output)
                    if all(clause_count.get(k, 0) > 0 for k in keys):
                        matches.append((kind, (a, b), keys))
        else:
            for a in others:
                keys = _template_keys(kind, (a,), output)
                if all(clause_count.get(k, 0) > 0 for k in keys):
                    matches.append((kind, (a,), keys))
    return matches


def extract_circuit_from_cnf(f: CnfFormula, hints: IoHints) -> Circuit:
    """Invert the Tseytin encoding by exact cover over gate clause groups.

    Non-input variables are processed in ascending index order; candidate
    decompositions for each are tried largest-clause-group first. XOR and
    XNOR templates are symmetric in all three variables, so a locally
    plausible match can be globally wrong; backtracking resolves such
    interlocks. After the first complete cover, a bounded continuation
    looks for a second cover with a different netlist and reports the
    ambiguity instead of silently picking one.
    """
    var_of = f.var_of()
    for net in hints.inputs:
        if net not in var_of:
            raise UndrivenNet(net)
    for net in hints.outputs:
        if net not in var_of:
            raise OutputMissing(net)

    input_vars = {var_of[n] for n in hints.inputs}
    internal = [v for v in range(1, f.num_vars + 1) if v not in input_vars]

    clause_count: dict[tuple[int, ...], int] = {}
    neighbours: dict[int, set[int]] = {v: set() for v in range(1, f.num_vars + 1)}
    for cl in f.clauses:
        key = cl.sorted_key()
        clause_count[key] = clause_count.get(key, 0) + 1
        vs = [lit.var for lit in cl.literals]
        for v in vs:
            neighbours[v].update(x for x in vs if x != v)
    total_clauses = len(f.clauses)

    # clauses that no decomposition of any variable can ever cover are
    # residual regardless of the search outcome
    coverable: set[tuple[int, ...]] = set()
    for v in internal:
        for _kind, _operands, keys in _candidate_matches(v, clause_count, neighbours):
            coverable.update(keys)
    residual_now = sum(n for key, n in clause_count.items() if key not in coverable)
    if residual_now:
        raise ResidualClauses(residual_now)

    solutions: list[dict[int, tuple[GateType, tuple[int, ...]]]] = []
    consumed = [0]
    best_remaining = [total_clauses]
    nodes = [0]

    def cover(idx: int, chosen: dict[int, tuple[GateType, tuple[int, ...]]]) -> None:
        nodes[0] += 1
        if solutions and nodes[0] > _AMBIGUITY_NODE_BUDGET:
            return
        if idx == len(internal):
            if consumed[0] == total_clauses:
                solutions.append(dict(chosen))
            return
        v = internal[idx]
        for kind, operands, keys in _candidate_matches(v, clause_count, neighbours):
            for k in keys:
                clause_count[k] -= 1
            consumed[0] += len(keys)
            best_remaining[0] = min(best_remaining[0], total_clauses - consumed[0])
            chosen[v] = (kind, operands)
            cover(idx + 1, chosen)
            del chosen[v]
            consumed[0] -= len(keys)
            for k in keys:
                clause_count[k] += 1
            if len(solutions) == 2 or (solutions and nodes[0] > _AMBIGUITY_NODE_BUDGET):
                return

    cover(0, {})
    if not solutions:
        raise ResidualClauses(best_remaining[0] if best_remaining[0] else total_clauses)
    if len(solutions) == 2 and solutions[0] != solutions[1]:
        differing = min(v for v in solutions[0] if solutions[0][v] != solutions[1][v])
        raise AmbiguousPattern(differing)

    gates = tuple(
        Gate(kind, tuple(f.name_of(x) for x in operands), f.name_of(v))
        for v, (kind, operands) in sorted(solutions[0].items())
    )
    circuit = Circuit(hints.name, tuple(hints.inputs), tuple(hints.outputs), gates)
    report = validate_circuit(circuit)
    if not report.ok:
        raise InvalidCircuit(report.violations)
    return canonical(circuit)


def synthesize_verilog(source: PlfDocument | CnfFormula, hints: IoHints) -> str:
    """Verilog text of the reconstructed netlist; nothing written on failure."""
    if isinstance(source, PlfDocument):
        circuit = plf_to_circuit(source, hints)
    else:
        circuit = extract_circuit_from_cnf(source, hints)
    return emit_verilog(circuit)


# ---------------------------------------------------------------------------
# hierarchical stitching

@dataclass(frozen=True)
class PortRef:
    """A net endpoint: `part` is None for top-level nets."""
    part: str | None
    net: str

    @staticmethod
    def parse(text: str) -> "PortRef":
        if "." in text:
            part, net = text.split(".", 1)
            return PortRef(part, net)
        return PortRef(None, text)


@dataclass(frozen=True)
class TopRecipe:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[tuple[str, PortRef], ...]      # (top output net, part output)
    bindings: tuple[tuple[PortRef, PortRef], ...]  # (part input, source)


def stitch_top(parts: Sequence[tuple[str, Circuit]] | Mapping[str, Circuit], recipe: TopRecipe) -> Circuit:
    """Flatten named parts into one circuit, prefixing internal nets."""
    items = list(parts.items()) if isinstance(parts, Mapping) else list(parts)
    by_name = dict(items)
    if len(by_name) != len(items):
        raise PortCollision("duplicate part name")

    # top output renames: part-local output net -> top net
    out_rename: dict[tuple[str, str], str] = {}
    for top_net, ref in recipe.outputs:
        if ref.part is None or ref.part not in by_name:
            raise DanglingInput(str(ref.part), ref.net)
        if ref.net not in by_name[ref.part].driver_map():
            raise DanglingInput(ref.part, ref.net)
        key = (ref.part, ref.net)
        if key in out_rename or top_net in recipe.inputs:
            raise PortCollision(top_net)
        out_rename[key] = top_net

    def driven_name(part: str, net: str) -> str:
        return out_rename.get((part, net), f"{part}_{net}")

    bindings: dict[tuple[str, str], PortRef] = {}
    for dst, src in recipe.bindings:
        if dst.part is None or dst.part not in by_name:
            raise DanglingInput(str(dst.part), dst.net)
        if dst.net not in by_name[dst.part].inputs:
            raise DanglingInput(dst.part, dst.net)
        bindings[(dst.part, dst.net)] = src

    def resolve(part: str, net: str) -> str:
        """Net name, in the flattened circuit, feeding `part`'s input `net`."""
        src = bindings.get((part, net))
        if src is None:
            raise DanglingInput(part, net)
        if src.part is None:
            if src.net not in recipe.inputs:
                raise DanglingInput(part, f"{net} (source '{src.net}' is not a top input)")
            return src.net
        source_circuit = by_name.get(src.part)
        if source_circuit is None or src.net not in source_circuit.driver_map():
            raise DanglingInput(part, f"{net} (source '{src.part}.{src.net}' is not a part output)")
        return driven_name(src.part, src.net)

    gates: list[Gate] = []
    for part_name, circuit in items:
        require_valid(circuit)
        rename: dict[str, str] = {}
        for net in circuit.inputs:
            rename[net] = resolve(part_name, net)
        for g in circuit.gates:
            rename[g.output] = driven_name(part_name, g.output)
        for g in circuit.gates:
            gates.append(Gate(g.kind, tuple(rename[n] for n in g.inputs), rename[g.output]))

    top_outputs = tuple(top_net for top_net, _ in recipe.outputs)
    top = Circuit(recipe.name, tuple(recipe.inputs), top_outputs, tuple(gates))
    report = validate_circuit(top)
    if not report.ok:
        for v in report.violations:
            if v.startswith("multiple drivers"):
                raise PortCollision(v.split(": ", 1)[1])
        raise InvalidCircuit(report.violations)
    return canonical(top, sort_operands=True)
