"""Design-family generators and the training/evaluation corpus.

Families: ripple adders (2..6 bit, no carry-in, carry-out), ripple
subtractors (2..6 bit, borrow out), k:1 multiplexers (k in {2,4,8,16}),
n-to-2^n decoders (n in 2..6) and the stitched 4-bit ALU. Gate-level
variants come from two axes: the allowed gate basis (full library,
NAND+NOT, NOR+NOT, or XOR-free AND/OR/NOT) and the aggregation structure
(balanced tree vs left chain) where the two differ.

Every corpus record is re-verified before anything is written: the
completion is re-parsed, reconstructed into a netlist and proven
equivalent to the golden circuit, so a corpus file can only ever contain
correct-by-construction encodings.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from enum import Enum

from .circuit import Circuit, Gate, GateType, canonical
from .cnf import CnfFormula, emit_dimacs, parse_dimacs
from .encode import plf_encode, tseytin_encode
from .equivalence import check_circuit_equivalence
from .errors import InfeasibleConstraint, VerificationFailed, VeritasError
from .plf import PlfDocument, emit_plf, parse_plf
from .synthesis import (
    IoHints, PortRef, TopRecipe, extract_circuit_from_cnf, plf_to_circuit, stitch_top,
)


class Family(Enum):
    ADDER = "adder"
    SUBTRACTOR = "subtractor"
    MUX = "mux"
    DECODER = "decoder"
    ALU = "alu"


class Split(Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


BASIS_FULL = frozenset(GateType)
BASIS_NAND = frozenset({GateType.NAND, GateType.NOT})
BASIS_NOR = frozenset({GateType.NOR, GateType.NOT})
BASIS_AOI = frozenset({GateType.AND, GateType.OR, GateType.NOT})


@dataclass(frozen=True)
class VariantConstraint:
    basis: frozenset[GateType]
    structure: str  # "tree" or "chain" aggregation


def variants_for(family: Family, width: int) -> dict[str, VariantConstraint]:
    if family in (Family.ADDER, Family.SUBTRACTOR):
        return {
            "ripple": VariantConstraint(BASIS_FULL, "tree"),
            "nand": VariantConstraint(BASIS_NAND, "tree"),
            "nor": VariantConstraint(BASIS_NOR, "tree"),
            "aoi": VariantConstraint(BASIS_AOI, "tree"),
        }
    if family is Family.MUX:
        table = {
            "tree": VariantConstraint(BASIS_FULL, "tree"),
            "nand": VariantConstraint(BASIS_NAND, "tree"),
            "nor": VariantConstraint(BASIS_NOR, "tree"),
        }
        if width >= 4:  # chained OR aggregation only differs from 4 terms up
            table["chain"] = VariantConstraint(BASIS_FULL, "chain")
        return table
    if family is Family.DECODER:
        table = {
            "tree": VariantConstraint(BASIS_FULL, "tree"),
            "nand": VariantConstraint(BASIS_NAND, "tree"),
            "nor": VariantConstraint(BASIS_NOR, "tree"),
        }
        if width >= 4:  # chained AND reduction only differs from 4 literals up
            table["chain"] = VariantConstraint(BASIS_FULL, "chain")
        return table
    return {"std": VariantConstraint(BASIS_FULL, "tree")}


@dataclass(frozen=True)
class DesignSpec:
    family: Family
    width: int
    variant: str
    seed: int = 0

    def __post_init__(self):
        if self.family in (Family.ADDER, Family.SUBTRACTOR) and not 2 <= self.width <= 6:
            raise ValueError(f"{self.family.value} width must be 2..6, got {self.width}")
        if self.family is Family.DECODER and not 2 <= self.width <= 6:
            raise ValueError(f"decoder width must be 2..6, got {self.width}")
        if self.family is Family.MUX and self.width not in (2, 4, 8, 16):
            raise ValueError(f"mux width must be a power of two in 2..16, got {self.width}")
        if self.family is Family.ALU and self.width != 4:
            raise ValueError("only the 4-bit ALU is defined")
        if self.variant not in variants_for(self.family, self.width):
            known = sorted(variants_for(self.family, self.width))
            raise ValueError(f"unknown variant '{self.variant}' for {self.family.value}{self.width}; known: {known}")

    @property
    def module_name(self) -> str:
        if self.family is Family.MUX:
            return f"mux_{self.width}x1"
        if self.family is Family.DECODER:
            return f"decoder_{self.width}x{2 ** self.width}"
        return f"{self.family.value}_{self.width}bit"

    def record_id(self, encoding: str) -> str:
        return f"{self.family.value}{self.width}_{self.variant}_{encoding}"


def default_grid(seed: int = 0) -> tuple[DesignSpec, ...]:
    """The full family grid: one spec per (family, width, variant)."""
    specs: list[DesignSpec] = []
    for width in range(2, 7):
        for family in (Family.ADDER, Family.SUBTRACTOR):
            for variant in variants_for(family, width):
                specs.append(DesignSpec(family, width, variant, seed))
    for width in (2, 4, 8, 16):
        for variant in variants_for(Family.MUX, width):
            specs.append(DesignSpec(Family.MUX, width, variant, seed))
    for width in range(2, 7):
        for variant in variants_for(Family.DECODER, width):
            specs.append(DesignSpec(Family.DECODER, width, variant, seed))
    return tuple(specs)


# ---------------------------------------------------------------------------
# netlist construction

def _reduce(nets: list[str], kind: GateType, prefix: str, final: str,
            structure: str, gates: list[Gate]) -> str:
    """Combine nets into one with 2-input gates; returns the result net."""
    if len(nets) == 1:
        return nets[0]
    if structure == "chain":
        acc = nets[0]
        for i, net in enumerate(nets[1:]):
            out = final if i == len(nets) - 2 else f"{prefix}{i}_"
            gates.append(Gate(kind, (acc, net), out))
            acc = out
        return acc
    layer = 0
    current = nets
    while len(current) > 1:
        nxt: list[str] = []
        for i in range(0, len(current) - 1, 2):
            out = final if len(current) == 2 else f"{prefix}{layer}_{i // 2}_"
            gates.append(Gate(kind, (current[i], current[i + 1]), out))
            nxt.append(out)
        if len(current) % 2:
            nxt.append(current[-1])
        current = nxt
        layer += 1
    return current[0]


def _adder(n: int) -> Circuit:
    gates: list[Gate] = []
    carry = ""
    for i in range(n):
        a, b = f"a_{i}_", f"b_{i}_"
        carry_out = "cout" if i == n - 1 else f"c_{i}_"
        if i == 0:
            gates.append(Gate(GateType.XOR, (a, b), "sum_0_"))
            gates.append(Gate(GateType.AND, (a, b), carry_out))
        else:
            gates.append(Gate(GateType.XOR, (a, b), f"p_{i}_"))
            gates.append(Gate(GateType.XOR, (f"p_{i}_", carry), f"sum_{i}_"))
            gates.append(Gate(GateType.AND, (a, b), f"g_{i}_"))
            gates.append(Gate(GateType.AND, (f"p_{i}_", carry), f"t_{i}_"))
            gates.append(Gate(GateType.OR, (f"g_{i}_", f"t_{i}_"), carry_out))
        carry = carry_out
    inputs = tuple(f"a_{i}_" for i in range(n)) + tuple(f"b_{i}_" for i in range(n))
    outputs = tuple(f"sum_{i}_" for i in range(n)) + ("cout",)
    return Circuit(f"adder_{n}bit", inputs, outputs, tuple(gates))


def _subtractor(n: int) -> Circuit:
    gates: list[Gate] = []
    borrow = ""
    for i in range(n):
        a, b = f"a_{i}_", f"b_{i}_"
        borrow_out = "borrow" if i == n - 1 else f"brw_{i}_"
        gates.append(Gate(GateType.NOT, (a,), f"na_{i}_"))
        if i == 0:
            gates.append(Gate(GateType.XOR, (a, b), "diff_0_"))
            gates.append(Gate(GateType.AND, (f"na_{i}_", b), borrow_out))
        else:
            gates.append(Gate(GateType.XOR, (a, b), f"p_{i}_"))
            gates.append(Gate(GateType.XOR, (f"p_{i}_", borrow), f"diff_{i}_"))
            gates.append(Gate(GateType.AND, (f"na_{i}_", b), f"g_{i}_"))
            gates.append(Gate(GateType.NOT, (f"p_{i}_",), f"np_{i}_"))
            gates.append(Gate(GateType.AND, (f"np_{i}_", borrow), f"t_{i}_"))
            gates.append(Gate(GateType.OR, (f"g_{i}_", f"t_{i}_"), borrow_out))
        borrow = borrow_out
    inputs = tuple(f"a_{i}_" for i in range(n)) + tuple(f"b_{i}_" for i in range(n))
    outputs = tuple(f"diff_{i}_" for i in range(n)) + ("borrow",)
    return Circuit(f"subtractor_{n}bit", inputs, outputs, tuple(gates))


def _mux(k: int, structure: str) -> Circuit:
    selects = k.bit_length() - 1
    gates: list[Gate] = []
    for i in range(selects):
        gates.append(Gate(GateType.NOT, (f"sel_{i}_",), f"nsel_{i}_"))
    terms: list[str] = []
    for j in range(k):
        literals = [
            f"sel_{i}_" if (j >> i) & 1 else f"nsel_{i}_" for i in range(selects)
        ]
        term = _reduce([f"in_{j}_", *literals], GateType.AND, f"m_{j}_", f"t_{j}_", structure, gates)
        terms.append(term)
    _reduce(terms, GateType.OR, "agg_", "out", structure, gates)
    inputs = tuple(f"sel_{i}_" for i in range(selects)) + tuple(f"in_{j}_" for j in range(k))
    return Circuit(f"mux_{k}x1", inputs, ("out",), tuple(gates))


def _decoder(n: int, structure: str) -> Circuit:
    gates: list[Gate] = []
    for i in range(n):
        gates.append(Gate(GateType.NOT, (f"a_{i}_",), f"na_{i}_"))
    for j in range(2 ** n):
        literals = [f"a_{i}_" if (j >> i) & 1 else f"na_{i}_" for i in range(n)]
        _reduce(literals, GateType.AND, f"m_{j}_", f"out_{j}_", structure, gates)
    inputs = tuple(f"a_{i}_" for i in range(n))
    outputs = tuple(f"out_{j}_" for j in range(2 ** n))
    return Circuit(f"decoder_{n}x{2 ** n}", inputs, outputs, tuple(gates))


def _bitwise(kind: GateType, n: int, out_prefix: str) -> Circuit:
    gates = tuple(Gate(kind, (f"a_{i}_", f"b_{i}_"), f"{out_prefix}_{i}_") for i in range(n))
    inputs = tuple(f"a_{i}_" for i in range(n)) + tuple(f"b_{i}_" for i in range(n))
    outputs = tuple(f"{out_prefix}_{i}_" for i in range(n))
    return Circuit(f"bitwise_{kind.value.lower()}_{n}bit", inputs, outputs, gates)


def alu_recipe(n: int = 4) -> tuple[list[tuple[str, Circuit]], TopRecipe]:
    """Parts and wiring of the 4-bit ALU: adder, subtractor, bitwise AND and
    OR arrays feeding one 4:1 mux per output bit, selected by (s_m, s_0):
    00 add, 01 subtract, 10 bitwise and, 11 bitwise or."""
    parts: list[tuple[str, Circuit]] = [
        ("add", generate_design(DesignSpec(Family.ADDER, n, "ripple"))),
        ("sub", generate_design(DesignSpec(Family.SUBTRACTOR, n, "ripple"))),
        ("band", canonical(_bitwise(GateType.AND, n, "and"), sort_operands=True)),
        ("bor", canonical(_bitwise(GateType.OR, n, "or"), sort_operands=True)),
    ]
    mux = canonical(_mux(4, "tree"), sort_operands=True)
    bindings: list[tuple[PortRef, PortRef]] = []
    for part_name in ("add", "sub", "band", "bor"):
        for i in range(n):
            bindings.append((PortRef(part_name, f"a_{i}_"), PortRef(None, f"a_{i}_")))
            bindings.append((PortRef(part_name, f"b_{i}_"), PortRef(None, f"b_{i}_")))
    sources = [("add", "sum"), ("sub", "diff"), ("band", "and"), ("bor", "or")]
    outputs: list[tuple[str, PortRef]] = []
    for i in range(n):
        mux_name = f"mux{i}"
        parts.append((mux_name, mux))
        for slot, (part_name, prefix) in enumerate(sources):
            bindings.append((PortRef(mux_name, f"in_{slot}_"), PortRef(part_name, f"{prefix}_{i}_")))
        bindings.append((PortRef(mux_name, "sel_0_"), PortRef(None, "s_0")))
        bindings.append((PortRef(mux_name, "sel_1_"), PortRef(None, "s_m")))
        outputs.append((f"y_{i}_", PortRef(mux_name, "out")))
    top_inputs = tuple(f"a_{i}_" for i in range(n)) + tuple(f"b_{i}_" for i in range(n)) + ("s_0", "s_m")
    recipe = TopRecipe("alu_4bit", top_inputs, tuple(outputs), tuple(bindings))
    return parts, recipe


# ---------------------------------------------------------------------------
# basis lowering

def _lower_gate(g: Gate, basis: frozenset[GateType]) -> list[Gate]:
    if g.kind in basis:
        return [g]
    a = g.inputs[0]
    b = g.inputs[1] if len(g.inputs) == 2 else None
    y = g.output
    w = [f"{y}_lw{i}" for i in range(1, 7)]

    if basis == BASIS_NAND:
        rules = {
            GateType.AND: [(GateType.NAND, (a, b), w[0]), (GateType.NOT, (w[0],), y)],
            GateType.OR: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                          (GateType.NAND, (w[0], w[1]), y)],
            GateType.NOR: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                           (GateType.NAND, (w[0], w[1]), w[2]), (GateType.NOT, (w[2],), y)],
            GateType.XOR: [(GateType.NAND, (a, b), w[0]), (GateType.NAND, (a, w[0]), w[1]),
                           (GateType.NAND, (b, w[0]), w[2]), (GateType.NAND, (w[1], w[2]), y)],
            GateType.XNOR: [(GateType.NAND, (a, b), w[0]), (GateType.NAND, (a, w[0]), w[1]),
                            (GateType.NAND, (b, w[0]), w[2]), (GateType.NAND, (w[1], w[2]), w[3]),
                            (GateType.NOT, (w[3],), y)],
            GateType.BUF: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (w[0],), y)],
        }
    elif basis == BASIS_NOR:
        rules = {
            GateType.OR: [(GateType.NOR, (a, b), w[0]), (GateType.NOT, (w[0],), y)],
            GateType.AND: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                           (GateType.NOR, (w[0], w[1]), y)],
            GateType.NAND: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                            (GateType.NOR, (w[0], w[1]), w[2]), (GateType.NOT, (w[2],), y)],
            GateType.XNOR: [(GateType.NOR, (a, b), w[0]), (GateType.NOR, (a, w[0]), w[1]),
                            (GateType.NOR, (b, w[0]), w[2]), (GateType.NOR, (w[1], w[2]), y)],
            GateType.XOR: [(GateType.NOR, (a, b), w[0]), (GateType.NOR, (a, w[0]), w[1]),
                           (GateType.NOR, (b, w[0]), w[2]), (GateType.NOR, (w[1], w[2]), w[3]),
                           (GateType.NOT, (w[3],), y)],
            GateType.BUF: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (w[0],), y)],
        }
    elif basis == BASIS_AOI:
        rules = {
            GateType.NAND: [(GateType.AND, (a, b), w[0]), (GateType.NOT, (w[0],), y)],
            GateType.NOR: [(GateType.OR, (a, b), w[0]), (GateType.NOT, (w[0],), y)],
            GateType.XOR: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                           (GateType.AND, (a, w[1]), w[2]), (GateType.AND, (w[0], b), w[3]),
                           (GateType.OR, (w[2], w[3]), y)],
            GateType.XNOR: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (b,), w[1]),
                            (GateType.AND, (a, b), w[2]), (GateType.AND, (w[0], w[1]), w[3]),
                            (GateType.OR, (w[2], w[3]), y)],
            GateType.BUF: [(GateType.NOT, (a,), w[0]), (GateType.NOT, (w[0],), y)],
        }
    else:
        raise InfeasibleConstraint(f"no lowering rules for basis {sorted(t.value for t in basis)}")

    if g.kind not in rules:
        raise InfeasibleConstraint(f"cannot express {g.kind.value} in basis {sorted(t.value for t in basis)}")
    return [Gate(kind, operands, out) for kind, operands, out in rules[g.kind]]


def lower_to_basis(c: Circuit, basis: frozenset[GateType]) -> Circuit:
    if all(g.kind in basis for g in c.gates):
        return c
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(_lower_gate(g, basis))
    return Circuit(c.name, c.inputs, c.outputs, tuple(gates))


def generate_design(spec: DesignSpec) -> Circuit:
    """Deterministic netlist for one (family, width, variant) point."""
    constraint = variants_for(spec.family, spec.width)[spec.variant]
    if spec.family is Family.ADDER:
        base = _adder(spec.width)
    elif spec.family is Family.SUBTRACTOR:
        base = _subtractor(spec.width)
    elif spec.family is Family.MUX:
        base = _mux(spec.width, constraint.structure)
    elif spec.family is Family.DECODER:
        base = _decoder(spec.width, constraint.structure)
    else:
        parts, recipe = alu_recipe(spec.width)
        return stitch_top(parts, recipe)
    lowered = lower_to_basis(base, constraint.basis)
    return canonical(lowered, sort_operands=True)


def golden_encodings(spec: DesignSpec) -> tuple[PlfDocument, CnfFormula]:
    circuit = generate_design(spec)
    return plf_encode(circuit), tseytin_encode(circuit)


def io_hints(spec: DesignSpec) -> IoHints:
    circuit = generate_design(spec)
    return IoHints(circuit.name, circuit.inputs, circuit.outputs)


# ---------------------------------------------------------------------------
# prompts

_ORDINAL = {0: "0th", 1: "1st", 2: "2nd", 3: "3rd"}


def _ordinal(i: int) -> str:
    return _ORDINAL.get(i, f"{i}th")


_BASIS_TEXT = {
    BASIS_FULL: "the full 8-gate library",
    BASIS_NAND: "only NAND and NOT gates",
    BASIS_NOR: "only NOR and NOT gates",
    BASIS_AOI: "only AND, OR and NOT gates (no XOR)",
}


def _port_lines(nets_with_desc: list[tuple[str, str]]) -> str:
    return "\n".join(f"    {net} : {desc}" for net, desc in nets_with_desc)


def render_prompt(spec: DesignSpec) -> str:
    constraint = variants_for(spec.family, spec.width)[spec.variant]
    n = spec.width
    basis_text = _BASIS_TEXT[constraint.basis]
    structure_text = "balanced-tree aggregation" if constraint.structure == "tree" else "chained aggregation"

    def bits(prefix: str, count: int, what: str) -> list[tuple[str, str]]:
        return [(f"{prefix}_{i}_", f"{_ordinal(i)} bit of {what}") for i in reversed(range(count))]

    if spec.family is Family.ADDER:
        head = f"Implement a {n}-bit adder for calculating the sum and carry of two {n}-bit numbers."
        ins = bits("a", n, "input a") + bits("b", n, "input b")
        outs = bits("sum", n, "output sum") + [("cout", "carry-out bit")]
        behaviour = f"Combinational ripple-carry addition of a and b using {basis_text}."
    elif spec.family is Family.SUBTRACTOR:
        head = f"Implement a {n}-bit subtractor for calculating the difference and borrow of two {n}-bit numbers."
        ins = bits("a", n, "input a") + bits("b", n, "input b")
        outs = bits("diff", n, "output diff") + [("borrow", "borrow bit")]
        behaviour = f"Combinational borrow-ripple subtraction of b from a using {basis_text}."
    elif spec.family is Family.MUX:
        s = n.bit_length() - 1
        head = f"Implement a {n}x1 multiplexer that routes the selected one of {n} data inputs to the output."
        ins = bits("sel", s, "the select input") + bits("in", n, "the data inputs")
        outs = [("out", "multiplexer output")]
        behaviour = f"Combinational {n}:1 selection with {structure_text}, using {basis_text}."
    elif spec.family is Family.DECODER:
        head = (f"Implement a {n}x{2 ** n} decoder that drives exactly one of its "
                f"{2 ** n} outputs high according to the {n}-bit select input.")
        ins = bits("a", n, "the select input a")
        outs = [(f"out_{j}_", f"one-hot output for select value {j}") for j in reversed(range(2 ** n))]
        behaviour = f"Combinational one-hot decode with {structure_text}, using {basis_text}."
    else:
        head = ("Implement a 4-bit ALU over two 4-bit inputs a and b with select lines "
                "s_m and s_0: 00 adds, 01 subtracts, 10 bitwise-ANDs, 11 bitwise-ORs.")
        ins = bits("a", n, "input a") + bits("b", n, "input b") + [
            ("s_0", "low select line"), ("s_m", "high select line")]
        outs = bits("y", n, "output y")
        behaviour = "Adder, subtractor, AND and OR arrays feeding one 4x1 mux per output bit."

    return (
        f"{head}\n"
        f"Module name:\n    {spec.module_name}\n"
        f"Input ports:\n{_port_lines(ins)}\n"
        f"Output ports:\n{_port_lines(outs)}\n"
        f"Implementation:\n    {behaviour}\n"
    )


# ---------------------------------------------------------------------------
# corpus records

@dataclass(frozen=True)
class SplitConfig:
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0

    def __post_init__(self):
        if any(f <= 0 for f in self.fractions) or abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError(f"fractions must be positive and sum to 1, got {self.fractions}")


@dataclass(frozen=True)
class PromptRecord:
    id: str
    prompt: str
    completion: str
    encoding: str  # "plf" or "tseytin"
    family: str
    width: int
    variant: str
    split: str

    def to_json(self) -> str:
        return json.dumps({
            "id": self.id, "prompt": self.prompt, "completion": self.completion,
            "encoding": self.encoding, "family": self.family, "width": self.width,
            "variant": self.variant, "split": self.split,
        })

    @staticmethod
    def from_json(line: str) -> "PromptRecord":
        raw = json.loads(line)
        return PromptRecord(
            raw["id"], raw["prompt"], raw["completion"], raw["encoding"],
            raw["family"], raw["width"], raw["variant"], raw["split"],
        )


def assign_splits(ids: list[str], cfg: SplitConfig) -> dict[str, Split]:
    """Deterministic split: records ranked by a seeded hash of their id,
    validation/test sizes floored from the fractions, leftovers to train."""
    total = len(ids)
    n_val = int(cfg.fractions[1] * total)
    n_test = int(cfg.fractions[2] * total)
    n_train = total - n_val - n_test
    ranked = sorted(ids, key=lambda i: hashlib.sha256(f"{cfg.seed}:{i}".encode()).hexdigest())
    assignment: dict[str, Split] = {}
    for pos, record_id in enumerate(ranked):
        if pos < n_train:
            assignment[record_id] = Split.TRAIN
        elif pos < n_train + n_val:
            assignment[record_id] = Split.VALIDATION
        else:
            assignment[record_id] = Split.TEST
    return assignment


def verify_completion(spec: DesignSpec, encoding: str, completion: str) -> None:
    """Re-parse a completion, rebuild the netlist, and prove it equivalent."""
    golden = generate_design(spec)
    hints = IoHints(golden.name, golden.inputs, golden.outputs)
    if encoding == "plf":
        rebuilt = plf_to_circuit(parse_plf(completion), hints)
    else:
        rebuilt = extract_circuit_from_cnf(parse_dimacs(completion), hints)
    verdict = check_circuit_equivalence(golden, rebuilt)
    if not verdict.equivalent:
        raise VeritasError("completion is not equivalent to the golden design")


@dataclass(frozen=True)
class CorpusManifest:
    path: str
    total: int
    by_split: dict[str, int]
    by_family: dict[str, int]
    seed: int

    def to_json(self) -> str:
        return json.dumps({
            "path": self.path, "total": self.total, "by_split": self.by_split,
            "by_family": self.by_family, "seed": self.seed,
        }, indent=2)


def build_records(
    specs: tuple[DesignSpec, ...] | list[DesignSpec],
    encodings: tuple[str, ...] = ("plf", "tseytin"),
    split: SplitConfig = SplitConfig(),
    verify: bool = True,
) -> list[PromptRecord]:
    drafts: list[tuple[DesignSpec, str, str, str]] = []
    for spec in specs:
        plf_doc, cnf = golden_encodings(spec)
        prompt = render_prompt(spec)
        for encoding in encodings:
            completion = emit_plf(plf_doc) if encoding == "plf" else emit_dimacs(cnf)
            drafts.append((spec, encoding, prompt, completion))

    ids = [spec.record_id(enc) for spec, enc, _, _ in drafts]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate record ids; specs must be unique per (family, width, variant)")
    splits = assign_splits(ids, split)
    records = []
    for spec, encoding, prompt, completion in drafts:
        record_id = spec.record_id(encoding)
        if verify:
            try:
                verify_completion(spec, encoding, completion)
            except VeritasError as e:
                raise VerificationFailed(record_id, str(e)) from e
        records.append(PromptRecord(
            record_id, prompt, completion, encoding, spec.family.value,
            spec.width, spec.variant, splits[record_id].value,
        ))
    return records


def generate_corpus(
    specs: tuple[DesignSpec, ...] | list[DesignSpec],
    out_path: str,
    encodings: tuple[str, ...] = ("plf", "tseytin"),
    split: SplitConfig = SplitConfig(),
    verify: bool = True,
) -> CorpusManifest:
    """Write the corpus (one JSON record per line) plus a manifest file.

    Every record is verified before anything is written; the write itself
    is atomic (temp file, then rename).
    """
    if not specs:
        raise ValueError("no design specs given")
    records = build_records(specs, encodings, split, verify)
    by_split: dict[str, int] = {}
    by_family: dict[str, int] = {}
    for r in records:
        by_split[r.split] = by_split.get(r.split, 0) + 1
        by_family[r.family] = by_family.get(r.family, 0) + 1
    manifest = CorpusManifest(out_path, len(records), by_split, by_family, split.seed)

    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    with open(out_path + ".manifest.json", "w") as fh:
        fh.write(manifest.to_json() + "\n")
    return manifest


def load_corpus(path: str) -> list[PromptRecord]:
    with open(path) as fh:
        return [PromptRecord.from_json(line) for line in fh if line.strip()]


def spec_from_record(record: PromptRecord) -> DesignSpec:
    return DesignSpec(Family(record.family), record.width, record.variant)
