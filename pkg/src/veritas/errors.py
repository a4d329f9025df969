"""Exception hierarchy shared across the toolkit.

Every error that callers are expected to catch and act on gets its own
class; anything else surfaces as a plain ValueError from the offending
constructor.
"""


class VeritasError(Exception):
    """Base class for all toolkit errors."""


class ParseError(VeritasError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class UnknownGate(VeritasError):
    """Gate keyword outside the supported 8-gate basis."""

    def __init__(self, name: str, line: int = 0):
        super().__init__(f"unknown gate '{name}'" + (f" at line {line}" if line else ""))
        self.name = name
        self.line = line


class UnsupportedConstruct(VeritasError):
    """Verilog input uses something outside the structural subset."""


class InvalidCircuit(VeritasError):
    """Circuit failed validation; carries the full violation list."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


class CyclicCircuit(VeritasError):
    """Combinational cycle found while ordering gates."""


class MissingInput(VeritasError):
    """Simulation asked to run without a value for a primary input."""

    def __init__(self, name: str):
        super().__init__(f"no value assigned to primary input '{name}'")
        self.name = name


class MalformedPlf(VeritasError):
    """A PLF document violates its well-formedness rules."""

    def __init__(self, entry_index: int, reason: str):
        super().__init__(f"entry {entry_index}: {reason}")
        self.entry_index = entry_index
        self.reason = reason


class ResourceLimit(VeritasError):
    """Solver exhausted its conflict budget."""

    def __init__(self, conflicts: int):
        super().__init__(f"conflict budget exhausted after {conflicts} conflicts")
        self.conflicts = conflicts


class TooLarge(VeritasError):
    """Instance exceeds the exhaustive solver's variable bound."""


class InterfaceMismatch(VeritasError):
    """Two circuits cannot be mitered; lists missing/extra ports."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class NotComparable(VeritasError):
    """CNF comparison impossible: the anchor (I/O) variables disagree."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class SynthesisError(VeritasError):
    """Base for reconstruction failures (PLF/CNF back to netlist)."""


class UnrecognizedShape(SynthesisError):
    """PLF entry does not match any single-gate shape."""

    def __init__(self, entry_index: int, reason: str):
        super().__init__(f"entry {entry_index}: {reason}")
        self.entry_index = entry_index
        self.reason = reason


class UndrivenNet(SynthesisError):
    """A referenced net is neither a declared input nor defined anywhere."""

    def __init__(self, name: str):
        super().__init__(f"net '{name}' is never driven")
        self.name = name


class OutputMissing(SynthesisError):
    """A declared output net has no definition."""

    def __init__(self, name: str):
        super().__init__(f"declared output '{name}' is never defined")
        self.name = name


class ResidualClauses(SynthesisError):
    """CNF extraction left clauses that match no gate pattern."""

    def __init__(self, count: int):
        super().__init__(f"{count} clause(s) match no gate pattern")
        self.count = count


class AmbiguousPattern(SynthesisError):
    """More than one gate decomposition survives the resolution order."""

    def __init__(self, var: int):
        super().__init__(f"multiple consistent gate decompositions around variable {var}")
        self.var = var


class DanglingInput(VeritasError):
    """A stitched part input was left unconnected."""

    def __init__(self, part: str, net: str):
        super().__init__(f"part '{part}' input '{net}' is unconnected")
        self.part = part
        self.net = net


class PortCollision(VeritasError):
    """Name clash while stitching parts into a top-level circuit."""

    def __init__(self, name: str):
        super().__init__(f"net name '{name}' is driven or declared more than once")
        self.name = name


class InfeasibleConstraint(VeritasError):
    """A variant constraint cannot express the requested design family."""


class VerificationFailed(VeritasError):
    """A corpus record failed its re-verification before write."""

    def __init__(self, record_id: str, detail: str = ""):
        super().__init__(f"record '{record_id}' failed re-verification" + (f": {detail}" if detail else ""))
        self.record_id = record_id


class NoFormulaFound(VeritasError):
    """No PLF block could be located in a raw completion."""


class PartialParse(VeritasError):
    """A PLF-looking block exists but fails the grammar."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class GenerationTimeout(VeritasError):
    """Backend did not answer in time (includes unreachable endpoints)."""


class HttpError(VeritasError):
    """Backend answered with a non-success HTTP status."""

    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"HTTP {status}" + (f": {detail}" if detail else ""))
        self.status = status


class AuthError(VeritasError):
    """Backend rejected the request's credentials."""


class InvalidQuery(VeritasError):
    """pass@k query violates 0 <= c <= n, 1 <= k <= n."""
