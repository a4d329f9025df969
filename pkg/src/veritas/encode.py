"""Circuit-to-CNF and circuit-to-PLF encoders.

Variable numbering is fixed: primary inputs take 1..|PI| in declared
order, then one variable per gate output in topological order. Each gate
contributes its clause template below; the templates are validated by
exhaustive truth-table enumeration in the test suite, which is the
authoritative check.

    AND  y<->(a&b)   : (-a -b  y) ( a -y) ( b -y)
    NAND y<->~(a&b)  : (-a -b -y) ( a  y) ( b  y)
    OR   y<->(a|b)   : ( a  b -y) (-a  y) (-b  y)
    NOR  y<->~(a|b)  : ( a  b  y) (-a -y) (-b -y)
    XOR  y<->~(a<->b): (-a -b -y) ( a  b -y) ( a -b  y) (-a  b  y)
    XNOR y<->(a<->b) : (-a -b  y) ( a  b  y) ( a -b -y) (-a  b -y)
    BUF  y<->a       : ( a -y) (-a  y)
    NOT  y<->~a      : ( a  y) (-a -y)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .circuit import Circuit, GateType, require_valid, topo_order, variable_numbering
from .cnf import Clause, CnfFormula
from .errors import MalformedPlf
from .plf import (
    And, Atom, Iff, Implies, Not, Or, PlfDocument, PlfEntry, PlfNode, validate_document,
)

# Templates over slot indices: 1 and 2 are the gate inputs, the highest
# slot (3, or 2 for unary gates) is the output.
GATE_TEMPLATES: dict[GateType, tuple[tuple[int, ...], ...]] = {
    GateType.AND: ((-1, -2, 3), (1, -3), (2, -3)),
    GateType.NAND: ((-1, -2, -3), (1, 3), (2, 3)),
    GateType.OR: ((1, 2, -3), (-1, 3), (-2, 3)),
    GateType.NOR: ((1, 2, 3), (-1, -3), (-2, -3)),
    GateType.XOR: ((-1, -2, -3), (1, 2, -3), (1, -2, 3), (-1, 2, 3)),
    GateType.XNOR: ((-1, -2, 3), (1, 2, 3), (1, -2, -3), (-1, 2, -3)),
    GateType.BUF: ((1, -2), (-1, 2)),
    GateType.NOT: ((1, 2), (-1, -2)),
}

GATE_CLAUSE_COUNTS = {kind: len(tpl) for kind, tpl in GATE_TEMPLATES.items()}


def instantiate_template(kind: GateType, operands: tuple[int, ...], output: int) -> list[Clause]:
    """Clauses of one gate with concrete variable numbers substituted in."""
    slots = (*operands, output)
    return [
        Clause.of(*((slots[abs(s) - 1] if s > 0 else -slots[abs(s) - 1]) for s in row))
        for row in GATE_TEMPLATES[kind]
    ]


def tseytin_encode(c: Circuit) -> CnfFormula:
    """Equisatisfiable CNF of the whole netlist, one template per gate."""
    require_valid(c)
    numbering = variable_numbering(c)
    clauses: list[Clause] = []
    for g in topo_order(c):
        operands = tuple(numbering[n] for n in g.inputs)
        clauses.extend(instantiate_template(g.kind, operands, numbering[g.output]))
    names = tuple(net for net, _ in sorted(numbering.items(), key=lambda kv: kv[1]))
    return CnfFormula(tuple(clauses), len(numbering), names, tuple(c.inputs), tuple(c.outputs))


_GATE_SHAPES = {
    GateType.AND: lambda a, b: And(a, b),
    GateType.NAND: lambda a, b: Not(And(a, b)),
    GateType.OR: lambda a, b: Or(a, b),
    GateType.NOR: lambda a, b: Not(Or(a, b)),
    GateType.XOR: lambda a, b: Not(Iff(a, b)),
    GateType.XNOR: lambda a, b: Iff(a, b),
    GateType.NOT: lambda a: Not(a),
    GateType.BUF: lambda a: a,
}


def gate_entry(kind: GateType, input_nets: tuple[str, ...], output_net: str) -> PlfEntry:
    rhs = _GATE_SHAPES[kind](*(Atom(n) for n in input_nets))
    return PlfEntry(output_net, rhs)


def plf_encode(c: Circuit) -> PlfDocument:
    """One `output <-> expression` entry per gate, in topological order."""
    require_valid(c)
    entries = tuple(gate_entry(g.kind, g.inputs, g.output) for g in topo_order(c))
    return PlfDocument(entries, tuple(c.inputs), tuple(c.outputs))


def flatten_double_negation(node: PlfNode) -> PlfNode:
    """Remove ~~e everywhere; the only normalization applied before shape matching."""
    if isinstance(node, Atom):
        return node
    if isinstance(node, Not):
        child = flatten_double_negation(node.child)
        if isinstance(child, Not):
            return child.child
        return Not(child)
    ctor = type(node)
    return ctor(flatten_double_negation(node.left), flatten_double_negation(node.right))


def match_gate_shape(rhs: PlfNode) -> tuple[GateType, tuple[str, ...]] | None:
    """Recognize one of the 8 single-gate right-hand sides, or None.

    Operands must be plain atoms; double negation is flattened first.
    """
    node = flatten_double_negation(rhs)
    if isinstance(node, Atom):
        return GateType.BUF, (node.name,)
    if isinstance(node, Not) and isinstance(node.child, Atom):
        return GateType.NOT, (node.child.name,)
    binary = {And: GateType.AND, Or: GateType.OR, Iff: GateType.XNOR}
    negated = {And: GateType.NAND, Or: GateType.NOR, Iff: GateType.XOR}
    inner, table = node, binary
    if isinstance(node, Not):
        inner, table = node.child, negated
    kind = table.get(type(inner))
    if kind is None:
        return None
    if isinstance(inner.left, Atom) and isinstance(inner.right, Atom):
        if inner.left.name == inner.right.name:
            return None  # degenerate operand pair, not a gate
        return kind, (inner.left.name, inner.right.name)
    return None


def plf_to_cnf(doc: PlfDocument) -> CnfFormula:
    """Equisatisfiable CNF of a PLF document.

    Gate-shaped entries reuse the exact per-gate templates (so encoding a
    circuit through PLF gives the same formula as tseytin_encode); general
    expression trees get one fresh auxiliary variable per operator node,
    named _t1, _t2, ... after the circuit variables.
    """
    validate_document(doc)
    numbering: dict[str, int] = {}
    for net in doc.inputs:
        numbering[net] = len(numbering) + 1
    for entry in doc.entries:
        if entry.output in numbering:
            raise MalformedPlf(len(numbering), f"net '{entry.output}' already numbered")
        numbering[entry.output] = len(numbering) + 1

    clauses: list[Clause] = []
    aux_names: list[str] = []
    aux_counter = [0]

    def fresh_aux() -> int:
        aux_counter[0] += 1
        name = f"_t{aux_counter[0]}"
        var = len(numbering) + len(aux_names) + 1
        aux_names.append(name)
        return var

    def encode_node(node: PlfNode, target: int, index: int) -> None:
        """Emit clauses forcing variable `target` to equal `node`'s value."""
        if isinstance(node, Atom):
            clauses.extend(instantiate_template(GateType.BUF, (numbering[node.name],), target))
            return
        if isinstance(node, Not):
            child = operand_var(node.child, index)
            clauses.extend(instantiate_template(GateType.NOT, (child,), target))
            return
        kind = {And: GateType.AND, Or: GateType.OR, Iff: GateType.XNOR}.get(type(node))
        left = operand_var(node.left, index)
        right = operand_var(node.right, index)
        if kind is not None:
            clauses.extend(instantiate_template(kind, (left, right), target))
            return
        if isinstance(node, Implies):
            # target <-> (left -> right): (-t -a b) (a t) (-b t)
            clauses.append(Clause.of(-target, -left, right))
            clauses.append(Clause.of(left, target))
            clauses.append(Clause.of(-right, target))
            return
        raise MalformedPlf(index, f"unsupported node {type(node).__name__}")

    def operand_var(node: PlfNode, index: int) -> int:
        if isinstance(node, Atom):
            if node.name not in numbering:
                raise MalformedPlf(index, f"atom '{node.name}' is neither an input nor a defined net")
            return numbering[node.name]
        var = fresh_aux()
        encode_node(node, var, index)
        return var

    for index, entry in enumerate(doc.entries):
        out_var = numbering[entry.output]
        shape = match_gate_shape(entry.rhs)
        if shape is not None:
            kind, operands = shape
            for net in operands:
                if net not in numbering:
                    raise MalformedPlf(index, f"atom '{net}' is neither an input nor a defined net")
            clauses.extend(instantiate_template(kind, tuple(numbering[n] for n in operands), out_var))
        else:
            encode_node(flatten_double_negation(entry.rhs), out_var, index)

    names = tuple(net for net, _ in sorted(numbering.items(), key=lambda kv: kv[1])) + tuple(aux_names)
    return CnfFormula(tuple(clauses), len(names), names, doc.inputs, doc.outputs)


# ---------------------------------------------------------------------------
# token accounting

TOKENIZER_ID = "lex-v1"

_TOKEN_PATTERN = re.compile(r"<->|->|-\d+|[A-Za-z0-9_]+|\S")


@dataclass(frozen=True)
class TokenCount:
    count: int
    tokenizer_id: str = TOKENIZER_ID


def count_tokens(text: str) -> TokenCount:
    """Lexical token count under the fixed "lex-v1" rule.

    A token is a maximal [A-Za-z0-9_]+ run, a multi-character operator
    (<->, ->), a signed integer, or any other single non-space character.
    Line breaks separate tokens but are not counted.
    """
    return TokenCount(len(_TOKEN_PATTERN.findall(text)))
