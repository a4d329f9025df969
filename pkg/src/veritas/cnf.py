"""Clause-level CNF values and the DIMACS interchange format.

Variables are positive integers 1..num_vars; every variable carries a net
name so encodings stay connected to the circuit they came from. DIMACS
emission writes `c varmap <index> <net>` comments (plus `c inputs` /
`c outputs` lines when the formula declares its interface) so the mapping
survives serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @property
    def as_int(self) -> int:
        return -self.var if self.negated else self.var

    @staticmethod
    def from_int(value: int) -> "Literal":
        if value == 0:
            raise ValueError("0 is not a literal")
        return Literal(abs(value), value < 0)

    def __invert__(self) -> "Literal":
        return Literal(self.var, not self.negated)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")
        ints = [lit.as_int for lit in self.literals]
        if len(set(ints)) != len(ints):
            raise ValueError(f"duplicate literal in clause {ints}")
        if len({abs(i) for i in ints}) != len(ints):
            raise ValueError(f"tautological clause {ints}")

    @staticmethod
    def of(*ints: int) -> "Clause":
        return Clause(tuple(Literal.from_int(i) for i in ints))

    def as_ints(self) -> tuple[int, ...]:
        return tuple(lit.as_int for lit in self.literals)

    def sorted_key(self) -> tuple[int, ...]:
        """Canonical form: literals ordered by (variable, polarity)."""
        return tuple(sorted(self.as_ints(), key=lambda i: (abs(i), i < 0)))


@dataclass(frozen=True)
class CnfFormula:
    clauses: tuple[Clause, ...]
    num_vars: int
    names: tuple[str, ...] = ()   # names[i] is the net bound to variable i+1
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        if self.names and len(self.names) != self.num_vars:
            raise ValueError("var map must cover exactly variables 1..num_vars")
        if self.names and len(set(self.names)) != len(self.names):
            raise ValueError("var map names must be unique")
        for cl in self.clauses:
            for lit in cl.literals:
                if lit.var > self.num_vars:
                    raise ValueError(f"literal over variable {lit.var} exceeds num_vars={self.num_vars}")
        io = (*self.inputs, *self.outputs)
        known = set(self.names)
        if self.names and any(n not in known for n in io):
            raise ValueError("declared interface net missing from var map")

    def name_of(self, var: int) -> str:
        return self.names[var - 1]

    def var_of(self) -> dict[str, int]:
        return {name: i + 1 for i, name in enumerate(self.names)}


def default_names(num_vars: int) -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(1, num_vars + 1))


def emit_dimacs(f: CnfFormula) -> str:
    lines = []
    for i, name in enumerate(f.names, start=1):
        lines.append(f"c varmap {i} {name}")
    if f.inputs:
        lines.append("c inputs " + " ".join(f.inputs))
    if f.outputs:
        lines.append("c outputs " + " ".join(f.outputs))
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for cl in f.clauses:
        lines.append(" ".join(str(i) for i in cl.as_ints()) + " 0")
    return "\n".join(lines) + "\n"


def dimacs_clause_text(f: CnfFormula) -> str:
    """Header plus clause lines only, no comments; used for token accounting."""
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for cl in f.clauses:
        lines.append(" ".join(str(i) for i in cl.as_ints()) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    num_vars: int | None = None
    declared_clauses: int | None = None
    clauses: list[Clause] = []
    varmap: dict[int, str] = {}
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 4 and parts[1] == "varmap":
                try:
                    varmap[int(parts[2])] = parts[3]
                except ValueError:
                    raise ParseError(lineno, f"bad varmap comment: '{line}'")
            elif len(parts) >= 2 and parts[1] == "inputs":
                inputs = tuple(parts[2:])
            elif len(parts) >= 2 and parts[1] == "outputs":
                outputs = tuple(parts[2:])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, f"bad problem line: '{line}'")
            try:
                num_vars, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(lineno, f"bad problem line: '{line}'")
            continue
        if num_vars is None:
            raise ParseError(lineno, "clause before 'p cnf' header")
        try:
            ints = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(lineno, f"bad clause line: '{line}'")
        if not ints or ints[-1] != 0:
            raise ParseError(lineno, "clause line must end with 0")
        body = ints[:-1]
        if not body or 0 in body:
            raise ParseError(lineno, f"bad clause line: '{line}'")
        try:
            clauses.append(Clause.of(*body))
        except ValueError as e:
            raise ParseError(lineno, str(e)) from None

    if num_vars is None:
        raise ParseError(1, "missing 'p cnf' header")
    if declared_clauses != len(clauses):
        raise ParseError(1, f"header declares {declared_clauses} clauses, found {len(clauses)}")
    if varmap:
        if set(varmap) != set(range(1, num_vars + 1)):
            raise ParseError(1, "varmap comments do not cover variables 1..num_vars")
        names = tuple(varmap[i] for i in range(1, num_vars + 1))
    else:
        names = default_names(num_vars)
    return CnfFormula(tuple(clauses), num_vars, names, inputs, outputs)
