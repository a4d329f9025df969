"""Combinational gate-level netlists: representation, validation, simulation.

A Circuit is an immutable value: named primary inputs/outputs plus a list
of 1- and 2-input gates over the 8-gate basis. Every other module in the
package builds on the invariants enforced here (single driver per net,
acyclic, declared identifiers only).
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import CyclicCircuit, InvalidCircuit, MissingInput

NET_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class GateType(Enum):
    AND = "AND"
    NAND = "NAND"
    OR = "OR"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    NOT = "NOT"
    BUF = "BUF"

    @property
    def arity(self) -> int:
        return 1 if self in (GateType.NOT, GateType.BUF) else 2


_GATE_FUNC = {
    GateType.AND: lambda a, b: a and b,
    GateType.NAND: lambda a, b: not (a and b),
    GateType.OR: lambda a, b: a or b,
    GateType.NOR: lambda a, b: not (a or b),
    GateType.XOR: lambda a, b: a != b,
    GateType.XNOR: lambda a, b: a == b,
    GateType.NOT: lambda a: not a,
    GateType.BUF: lambda a: a,
}


def gate_function(kind: GateType, values: Iterable[bool]) -> bool:
    """Boolean semantics of one gate applied to already-ordered input values."""
    return bool(_GATE_FUNC[kind](*values))


@dataclass(frozen=True)
class Gate:
    kind: GateType
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Circuit:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    gates: tuple[Gate, ...]

    def net_names(self) -> set[str]:
        nets = set(self.inputs) | set(self.outputs)
        for g in self.gates:
            nets.add(g.output)
            nets.update(g.inputs)
        return nets

    def driver_map(self) -> dict[str, Gate]:
        """Map from net name to the gate driving it (primary inputs absent)."""
        return {g.output: g for g in self.gates}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_names(c: Circuit, violations: list[str]) -> None:
    if not NET_NAME_RE.match(c.name or ""):
        violations.append(f"bad circuit name: '{c.name}'")
    for net in sorted(c.net_names()):
        if not NET_NAME_RE.match(net):
            violations.append(f"bad net name: '{net}'")


def validate_circuit(c: Circuit) -> ValidationReport:
    """Check every structural invariant; violations are data, not failures."""
    violations: list[str] = []
    _check_names(c, violations)

    drivers: dict[str, str] = {}
    for net in c.inputs:
        if net in drivers:
            violations.append(f"multiple drivers: {net}")
        drivers[net] = "primary input"
    for g in c.gates:
        if len(g.inputs) != g.kind.arity:
            violations.append(f"gate {g.output}: {g.kind.value} expects {g.kind.arity} input(s), got {len(g.inputs)}")
        if not g.output:
            violations.append("gate with empty output name")
            continue
        if g.output in g.inputs:
            violations.append(f"gate {g.output}: output feeds its own input list")
        if len(set(g.inputs)) != len(g.inputs):
            violations.append(f"gate {g.output}: duplicate input net")
        if g.output in drivers:
            violations.append(f"multiple drivers: {g.output}")
        drivers[g.output] = f"gate {g.kind.value}"

    for g in c.gates:
        for net in g.inputs:
            if net not in drivers:
                violations.append(f"undriven net: {net} (input of gate {g.output})")
    for net in c.outputs:
        if net not in drivers:
            violations.append(f"undriven primary output: {net}")
    seen_outputs: set[str] = set()
    for net in c.outputs:
        if net in seen_outputs:
            violations.append(f"duplicate primary output: {net}")
        seen_outputs.add(net)
        if net in c.inputs:
            violations.append(f"net is both primary input and primary output: {net}")

    violations.extend(_find_cycles(c))
    return ValidationReport(tuple(dict.fromkeys(violations)))


def _find_cycles(c: Circuit) -> list[str]:
    driver = c.driver_map()
    state: dict[str, int] = {}  # 0 visiting, 1 done
    cycle_nets: list[str] = []

    for start in sorted(driver):
        if state.get(start) == 1:
            continue
        stack = [(start, iter(driver[start].inputs if start in driver else ()))]
        state[start] = 0
        path = [start]
        while stack:
            net, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in driver:
                    continue
                if state.get(nxt) == 0:
                    cycle = path[path.index(nxt):] if nxt in path else [nxt, net]
                    cycle_nets.append("combinational cycle through " + ",".join(sorted(set(cycle))))
                    continue
                if nxt not in state:
                    state[nxt] = 0
                    stack.append((nxt, iter(driver[nxt].inputs)))
                    path.append(nxt)
                    advanced = True
                    break
            if not advanced:
                state[net] = 1
                stack.pop()
                path.pop()
    return cycle_nets


def require_valid(c: Circuit) -> None:
    report = validate_circuit(c)
    if not report.ok:
        raise InvalidCircuit(report.violations)


@lru_cache(maxsize=512)
def topo_order(c: Circuit) -> tuple[Gate, ...]:
    """Gates in dependency order, ties broken by output name ascending.

    Deterministic Kahn's algorithm: among gates whose inputs are all
    available, the one with the lexicographically smallest output name
    is emitted first.
    """
    driver = c.driver_map()
    available = set(c.inputs)
    pending: dict[str, int] = {}  # gate output -> unmet input count
    consumers: dict[str, list[str]] = {}
    for g in c.gates:
        unmet = 0
        for net in g.inputs:
            if net not in available:
                unmet += 1
                consumers.setdefault(net, []).append(g.output)
        pending[g.output] = unmet

    ready = [out for out, n in pending.items() if n == 0]
    heapq.heapify(ready)
    order: list[Gate] = []
    while ready:
        out = heapq.heappop(ready)
        order.append(driver[out])
        for consumer in consumers.get(out, ()):
            pending[consumer] -= 1
            if pending[consumer] == 0:
                heapq.heappush(ready, consumer)
    if len(order) != len(c.gates):
        stuck = sorted(out for out, n in pending.items() if n > 0)
        raise CyclicCircuit("combinational cycle through " + ",".join(stuck))
    return tuple(order)


def variable_numbering(c: Circuit) -> dict[str, int]:
    """Net -> index under the fixed convention: primary inputs in declared
    order get 1..|PI|, then one index per gate output in topological order."""
    numbering: dict[str, int] = {}
    for net in c.inputs:
        numbering[net] = len(numbering) + 1
    for g in topo_order(c):
        numbering[g.output] = len(numbering) + 1
    return numbering


def canonical(c: Circuit, *, sort_operands: bool = False) -> Circuit:
    """The circuit with its gate list in canonical topological order.

    With sort_operands=True the operands of the (commutative) 2-input
    gates are additionally ordered by variable number, which is the form
    the CNF extractor reconstructs; generators emit this form so encoding
    round trips are exact identities.
    """
    gates = topo_order(c)
    if sort_operands:
        numbering = variable_numbering(c)
        gates = tuple(
            Gate(g.kind, tuple(sorted(g.inputs, key=numbering.__getitem__)), g.output)
            for g in gates
        )
    return Circuit(c.name, tuple(c.inputs), tuple(c.outputs), gates)


def simulate(c: Circuit, inputs: Mapping[str, bool]) -> dict[str, bool]:
    """Evaluate the netlist on one input assignment; returns output values."""
    extra = set(inputs) - set(c.inputs)
    if extra:
        raise ValueError(f"assignment covers nets that are not primary inputs: {sorted(extra)}")
    values: dict[str, bool] = {}
    for net in c.inputs:
        if net not in inputs:
            raise MissingInput(net)
        values[net] = bool(inputs[net])
    for g in topo_order(c):
        values[g.output] = gate_function(g.kind, (values[n] for n in g.inputs))
    return {net: values[net] for net in c.outputs}
