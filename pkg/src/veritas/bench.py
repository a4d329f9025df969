""".bench netlist reader/writer.

Dialect: `INPUT(net)`, `OUTPUT(net)`, `net = GATE(a[, b])` with GATE in
{AND, NAND, OR, NOR, XOR, XNOR, NOT, BUFF}; `BUF` is accepted as an alias
of `BUFF` on input. `#` starts a comment; whitespace between tokens is
ignored. Emission is canonical: a `# name:` header, INPUT lines in
primary-input order, OUTPUT lines in primary-output order, then one gate
per line in topological order.
"""

from __future__ import annotations

import re

from .circuit import Circuit, Gate, GateType, require_valid, topo_order
from .errors import ParseError, UnknownGate

_GATE_LINE_RE = re.compile(
    r"(?P<out>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<kind>[A-Za-z]+)\s*\(\s*(?P<args>[^)]*)\)\s*\Z"
)
_IO_LINE_RE = re.compile(r"(?P<kw>INPUT|OUTPUT)\s*\(\s*(?P<net>[A-Za-z_][A-Za-z0-9_]*)\s*\)\s*\Z")

_KEYWORD_TO_KIND = {t.value: t for t in GateType}
_KEYWORD_TO_KIND["BUFF"] = GateType.BUF


def parse_bench(text: str) -> Circuit:
    name = "top"
    inputs: list[str] = []
    outputs: list[str] = []
    gates: list[Gate] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)
        comment = raw.split("#", 1)[1] if "#" in raw else ""
        m = re.match(r"\s*name:\s*([A-Za-z_][A-Za-z0-9_]*)\s*\Z", comment)
        if m:
            name = m.group(1)
        line = line[0].strip()
        if not line:
            continue
        io = _IO_LINE_RE.match(line)
        if io:
            (inputs if io.group("kw") == "INPUT" else outputs).append(io.group("net"))
            continue
        g = _GATE_LINE_RE.match(line)
        if g is None:
            raise ParseError(lineno, f"unrecognized line: '{line}'")
        keyword = g.group("kind").upper()
        if keyword not in _KEYWORD_TO_KIND:
            raise UnknownGate(g.group("kind"), lineno)
        kind = _KEYWORD_TO_KIND[keyword]
        args = [a.strip() for a in g.group("args").split(",")] if g.group("args").strip() else []
        if any(not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", a) for a in args):
            raise ParseError(lineno, f"bad operand list: '{g.group('args')}'")
        if len(args) != kind.arity:
            raise ParseError(lineno, f"{keyword} expects {kind.arity} operand(s), got {len(args)}")
        gates.append(Gate(kind, tuple(args), g.group("out")))

    return Circuit(name, tuple(inputs), tuple(outputs), tuple(gates))


def emit_bench(c: Circuit) -> str:
    require_valid(c)
    lines = [f"# name: {c.name}"]
    lines.extend(f"INPUT({net})" for net in c.inputs)
    lines.extend(f"OUTPUT({net})" for net in c.outputs)
    for g in topo_order(c):
        keyword = "BUFF" if g.kind is GateType.BUF else g.kind.value
        lines.append(f"{g.output} = {keyword}({', '.join(g.inputs)})")
    return "\n".join(lines) + "\n"
