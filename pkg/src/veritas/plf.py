"""Propositional-logic formulas: per-gate equivalence entries and their text form.

A PlfDocument is an ordered list of `output <-> expression` entries, one
per defined net, plus the declared interface. Text grammar (one entry per
line, `#` starts a comment):

    entry := IDENT "<->" expr
    expr  := iff
    iff   := imp ("<->" imp)*          left-associative
    imp   := or ("->" or)*             left-associative
    or    := and ("|" and)*
    and   := unary ("&" unary)*
    unary := "~" unary | IDENT | "(" expr ")"

`# inputs: ...` and `# outputs: ...` comment directives carry the declared
interface through serialization; without them the parser infers inputs
(atoms never defined, in first-use order) and outputs (entries no other
entry consumes).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedPlf, ParseError


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "PlfNode"


@dataclass(frozen=True)
class And:
    left: "PlfNode"
    right: "PlfNode"


@dataclass(frozen=True)
class Or:
    left: "PlfNode"
    right: "PlfNode"


@dataclass(frozen=True)
class Implies:
    left: "PlfNode"
    right: "PlfNode"


@dataclass(frozen=True)
class Iff:
    left: "PlfNode"
    right: "PlfNode"


PlfNode = Atom | Not | And | Or | Implies | Iff


@dataclass(frozen=True)
class PlfEntry:
    output: str
    rhs: PlfNode

    @property
    def formula(self) -> Iff:
        """The entry as a single IFF-rooted node, `output <-> rhs`."""
        return Iff(Atom(self.output), self.rhs)


@dataclass(frozen=True)
class PlfDocument:
    entries: tuple[PlfEntry, ...]
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def defined_nets(self) -> set[str]:
        return {e.output for e in self.entries}


def atoms_of(node: PlfNode) -> set[str]:
    if isinstance(node, Atom):
        return {node.name}
    if isinstance(node, Not):
        return atoms_of(node.child)
    return atoms_of(node.left) | atoms_of(node.right)


def validate_document(doc: PlfDocument) -> None:
    """Raise MalformedPlf if an entry redefines a net or uses an unknown one."""
    defined: set[str] = set()
    for idx, entry in enumerate(doc.entries):
        if entry.output in defined:
            raise MalformedPlf(idx, f"net '{entry.output}' defined twice")
        if entry.output in doc.inputs:
            raise MalformedPlf(idx, f"declared input '{entry.output}' cannot be defined")
        defined.add(entry.output)
    known = defined | set(doc.inputs)
    for idx, entry in enumerate(doc.entries):
        for atom in sorted(atoms_of(entry.rhs)):
            if atom not in known:
                raise MalformedPlf(idx, f"atom '{atom}' is neither an input nor a defined net")
    for out in doc.outputs:
        if out not in known:
            raise MalformedPlf(len(doc.entries), f"declared output '{out}' is never defined")


# ---------------------------------------------------------------------------
# printing

_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6}
_OP_TEXT = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def format_node(node: PlfNode) -> str:
    return _format(node, 0)


def _format(node: PlfNode, parent_prec: int) -> str:
    prec = _PRECEDENCE[type(node)]
    if isinstance(node, Atom):
        text = node.name
    elif isinstance(node, Not):
        text = "~" + _format(node.child, prec)
    else:
        # left-associative binary operators: right child needs strictly
        # higher precedence to print unparenthesized
        text = f"{_format(node.left, prec)} {_OP_TEXT[type(node)]} {_format(node.right, prec + 1)}"
    if prec < parent_prec:
        return f"({text})"
    return text


def emit_plf(doc: PlfDocument) -> str:
    lines = []
    if doc.inputs:
        lines.append("# inputs: " + " ".join(doc.inputs))
    if doc.outputs:
        lines.append("# outputs: " + " ".join(doc.outputs))
    for entry in doc.entries:
        # a bare IFF on the right is parenthesized so the entry connective
        # stays visually distinct from the expression
        rhs = _format(entry.rhs, _PRECEDENCE[Iff] + 1 if isinstance(entry.rhs, Iff) else 0)
        lines.append(f"{entry.output} <-> {rhs}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"<->|->|[A-Za-z_][A-Za-z0-9_]*|[~&|()]|\S")
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class _LineParser:
    def __init__(self, tokens: list[str], lineno: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.lineno, "unexpected end of entry")
        self.pos += 1
        return tok

    def parse_entry(self) -> PlfEntry:
        out = self.take()
        if not IDENT_RE.match(out):
            raise ParseError(self.lineno, f"expected net name, got '{out}'")
        op = self.take()
        if op != "<->":
            raise ParseError(self.lineno, f"expected '<->' after '{out}', got '{op}'")
        rhs = self.parse_expr()
        if self.peek() is not None:
            raise ParseError(self.lineno, f"trailing tokens after entry: '{self.peek()}'")
        return PlfEntry(out, rhs)

    def parse_expr(self) -> PlfNode:
        return self.parse_iff()

    def parse_iff(self) -> PlfNode:
        node = self.parse_imp()
        while self.peek() == "<->":
            self.take()
            node = Iff(node, self.parse_imp())
        return node

    def parse_imp(self) -> PlfNode:
        node = self.parse_or()
        while self.peek() == "->":
            self.take()
            node = Implies(node, self.parse_or())
        return node

    def parse_or(self) -> PlfNode:
        node = self.parse_and()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> PlfNode:
        node = self.parse_unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> PlfNode:
        tok = self.take()
        if tok == "~":
            return Not(self.parse_unary())
        if tok == "(":
            node = self.parse_expr()
            closing = self.take()
            if closing != ")":
                raise ParseError(self.lineno, f"expected ')', got '{closing}'")
            return node
        if IDENT_RE.match(tok):
            return Atom(tok)
        raise ParseError(self.lineno, f"unexpected token '{tok}'")


def parse_entry_line(line: str, lineno: int = 1) -> PlfEntry:
    tokens = _TOKEN_RE.findall(line)
    for tok in tokens:
        if not (tok in ("<->", "->", "~", "&", "|", "(", ")") or IDENT_RE.match(tok)):
            raise ParseError(lineno, f"unknown operator or symbol '{tok}'")
    return _LineParser(tokens, lineno).parse_entry()


def parse_plf(text: str) -> PlfDocument:
    entries: list[PlfEntry] = []
    declared_inputs: tuple[str, ...] | None = None
    declared_outputs: tuple[str, ...] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("inputs:"):
                declared_inputs = tuple(body[len("inputs:"):].split())
            elif body.startswith("outputs:"):
                declared_outputs = tuple(body[len("outputs:"):].split())
            continue
        entries.append(parse_entry_line(line, lineno))

    if not entries:
        raise ParseError(1, "no entries found")

    defined = {e.output for e in entries}
    if declared_inputs is None:
        seen: dict[str, None] = {}
        for e in entries:
            for atom in _atoms_in_order(e.rhs):
                if atom not in defined and atom not in seen:
                    seen[atom] = None
        declared_inputs = tuple(seen)
    if declared_outputs is None:
        consumed = set()
        for e in entries:
            consumed |= atoms_of(e.rhs)
        declared_outputs = tuple(e.output for e in entries if e.output not in consumed)

    doc = PlfDocument(tuple(entries), declared_inputs, declared_outputs)
    validate_document(doc)
    return doc


def _atoms_in_order(node: PlfNode) -> list[str]:
    if isinstance(node, Atom):
        return [node.name]
    if isinstance(node, Not):
        return _atoms_in_order(node.child)
    return _atoms_in_order(node.left) + _atoms_in_order(node.right)
