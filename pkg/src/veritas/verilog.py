"""Structural Verilog subset: gate-primitive netlists only.

Accepted grammar:

    module <name>(<port>, ...);
      input  a, b, ...;
      output y, ...;
      wire   w, ...;            (zero or more declarations of each kind)
      <prim> <inst>(<out>, <in>, ...);
    endmodule

with <prim> in {and, nand, or, nor, xor, xnor, not, buf}. Anything
behavioral (always blocks, assign expressions, registers, buses) raises
UnsupportedConstruct. Emission is canonical: ports listed inputs-first,
one declaration line per kind, instances g0, g1, ... in topological order.
"""

from __future__ import annotations

import re

from .circuit import Circuit, Gate, GateType, require_valid, topo_order
from .errors import ParseError, UnsupportedConstruct

PRIMITIVES = {t.value.lower(): t for t in GateType}

_BEHAVIORAL_KEYWORDS = {
    "always", "assign", "reg", "initial", "if", "else", "case", "begin", "end",
    "posedge", "negedge", "parameter", "localparam", "generate", "for", "function",
}

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*|[(),;]|\S")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for tok in _TOKEN_RE.findall(line):
            tokens.append((tok, lineno))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[tuple[str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    @property
    def line(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.tokens[-1][1] if self.tokens else 1

    def take(self) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError(self.line, "unexpected end of input")
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, want: str) -> None:
        got = self.take()
        if got != want:
            raise ParseError(self.line, f"expected '{want}', got '{got}'")


def _ident(cur: _Cursor) -> str:
    tok = cur.take()
    if not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", tok):
        raise ParseError(cur.line, f"expected identifier, got '{tok}'")
    return tok


def _ident_list(cur: _Cursor) -> list[str]:
    names = [_ident(cur)]
    while cur.peek() == ",":
        cur.take()
        names.append(_ident(cur))
    cur.expect(";")
    return names


def parse_structural_verilog(text: str) -> Circuit:
    cur = _Cursor(_tokenize(text))
    cur.expect("module")
    name = _ident(cur)
    cur.expect("(")
    ports: list[str] = []
    if cur.peek() != ")":
        ports.append(_ident(cur))
        while cur.peek() == ",":
            cur.take()
            ports.append(_ident(cur))
    cur.expect(")")
    cur.expect(";")

    inputs: list[str] = []
    outputs: list[str] = []
    wires: list[str] = []
    gates: list[Gate] = []

    while True:
        tok = cur.peek()
        if tok is None:
            raise ParseError(cur.line, "missing 'endmodule'")
        if tok == "endmodule":
            cur.take()
            break
        if tok in _BEHAVIORAL_KEYWORDS:
            raise UnsupportedConstruct(f"line {cur.line}: '{tok}' is outside the structural subset")
        if tok in ("@", "#", "[", "="):
            raise UnsupportedConstruct(f"line {cur.line}: '{tok}' is outside the structural subset")
        if tok == "input":
            cur.take()
            inputs.extend(_ident_list(cur))
        elif tok == "output":
            cur.take()
            outputs.extend(_ident_list(cur))
        elif tok == "wire":
            cur.take()
            wires.extend(_ident_list(cur))
        elif tok in PRIMITIVES:
            kind = PRIMITIVES[cur.take()]
            _ident(cur)  # instance name, not retained
            cur.expect("(")
            args = [_ident(cur)]
            while cur.peek() == ",":
                cur.take()
                args.append(_ident(cur))
            cur.expect(")")
            cur.expect(";")
            if len(args) != kind.arity + 1:
                raise ParseError(cur.line, f"{kind.value.lower()} expects {kind.arity + 1} connections, got {len(args)}")
            gates.append(Gate(kind, tuple(args[1:]), args[0]))
        else:
            raise UnsupportedConstruct(f"line {cur.line}: '{tok}' is not a supported gate primitive")

    declared = set(inputs) | set(outputs) | set(wires)
    for p in ports:
        if p not in set(inputs) | set(outputs):
            raise ParseError(1, f"port '{p}' has no direction declaration")
    for net in sorted({n for g in gates for n in (*g.inputs, g.output)}):
        if net not in declared:
            raise ParseError(1, f"net '{net}' used but never declared")
    for net in inputs + outputs:
        if net not in ports:
            raise ParseError(1, f"'{net}' declared {('input' if net in inputs else 'output')} but not listed as a port")

    return Circuit(name, tuple(inputs), tuple(outputs), tuple(gates))


def emit_verilog(c: Circuit) -> str:
    require_valid(c)
    ordered = topo_order(c)
    internal = [g.output for g in ordered if g.output not in set(c.outputs)]
    lines = [f"module {c.name}({', '.join((*c.inputs, *c.outputs))});"]
    lines.append(f"  input {', '.join(c.inputs)};")
    lines.append(f"  output {', '.join(c.outputs)};")
    if internal:
        lines.append(f"  wire {', '.join(internal)};")
    for i, g in enumerate(ordered):
        prim = g.kind.value.lower()
        lines.append(f"  {prim} g{i}({g.output}, {', '.join(g.inputs)});")
    lines.append("endmodule")
    return "\n".join(lines) + "\n"
