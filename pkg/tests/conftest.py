"""Shared fixtures: the design grid, generated netlists, and the
independent arithmetic oracle used to judge simulations."""

from __future__ import annotations

import pytest

from veritas.circuit import Circuit, Gate, GateType, canonical
from veritas.corpus import DesignSpec, Family, default_grid, generate_design


@pytest.fixture(scope="session")
def grid_specs() -> tuple[DesignSpec, ...]:
    return default_grid()


@pytest.fixture(scope="session")
def grid_designs(grid_specs) -> dict[DesignSpec, Circuit]:
    return {spec: generate_design(spec) for spec in grid_specs}


def oracle_outputs(spec: DesignSpec, stimulus: dict[str, bool]) -> dict[str, bool]:
    """Expected primary-output values from plain integer arithmetic."""
    n = spec.width

    def word(prefix: str, count: int) -> int:
        return sum(int(stimulus[f"{prefix}_{i}_"]) << i for i in range(count))

    if spec.family is Family.ADDER:
        total = word("a", n) + word("b", n)
        out = {f"sum_{i}_": bool((total >> i) & 1) for i in range(n)}
        out["cout"] = bool((total >> n) & 1)
        return out
    if spec.family is Family.SUBTRACTOR:
        a, b = word("a", n), word("b", n)
        diff = (a - b) % (1 << n)
        out = {f"diff_{i}_": bool((diff >> i) & 1) for i in range(n)}
        out["borrow"] = a < b
        return out
    if spec.family is Family.MUX:
        selects = n.bit_length() - 1
        index = sum(int(stimulus[f"sel_{i}_"]) << i for i in range(selects))
        return {"out": stimulus[f"in_{index}_"]}
    if spec.family is Family.DECODER:
        index = word("a", n)
        return {f"out_{j}_": j == index for j in range(1 << n)}
    if spec.family is Family.ALU:
        a, b = word("a", n), word("b", n)
        op = int(stimulus["s_m"]) * 2 + int(stimulus["s_0"])
        value = [(a + b) & 15, (a - b) & 15, a & b, a | b][op]
        return {f"y_{i}_": bool((value >> i) & 1) for i in range(n)}
    raise AssertionError(spec)


def full_adder() -> Circuit:
    """1-bit full adder in canonical form, shared by several test modules."""
    gates = (
        Gate(GateType.XOR, ("a", "b"), "p"),
        Gate(GateType.XOR, ("p", "cin"), "sum"),
        Gate(GateType.AND, ("a", "b"), "g"),
        Gate(GateType.AND, ("p", "cin"), "t"),
        Gate(GateType.OR, ("g", "t"), "cout"),
    )
    return canonical(
        Circuit("full_adder", ("a", "b", "cin"), ("sum", "cout"), gates),
        sort_operands=True,
    )
