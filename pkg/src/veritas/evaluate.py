"""pass@k arithmetic and the end-to-end evaluation pipeline.

pass@k is computed exactly in product form,

    pass@k = 1 - C(n-c, k)/C(n, k) = 1 - prod_{i<k} (n-c-i)/(n-i),

which avoids big binomials and is exact for desk-scale n. The evaluation
run drives prompts through a backend, extracts PLF from the raw
completions, reconstructs netlists and grades them by miter-SAT
equivalence against the golden designs; the structural CNF match is
reported alongside. Backend failures are counted as infrastructure
errors, never as wrong completions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .cnf import dimacs_clause_text
from .corpus import DesignSpec, generate_design
from .encode import count_tokens, plf_encode, tseytin_encode
from .equivalence import check_circuit_equivalence, check_cnf_equivalence
from .errors import (
    AuthError, GenerationTimeout, HttpError, InvalidQuery, NoFormulaFound,
    NotComparable, PartialParse, SynthesisError, VeritasError,
)
from .llm import Backend, GenerationParams, generate_many
from .plf import emit_plf
from .synthesis import IoHints, plf_to_circuit


def pass_at_k(n: int, c: int, k: int) -> float:
    """Probability that at least one of k samples out of n is correct."""
    if not (0 <= c <= n and 1 <= k <= n):
        raise InvalidQuery(f"need 0 <= c <= n and 1 <= k <= n, got n={n} c={c} k={k}")
    if k > n - c:
        return 1.0
    probability = 1.0
    for i in range(k):
        probability *= (n - c - i) / (n - i)
    return 1.0 - probability


class Grade(Enum):
    CORRECT = "correct"
    WRONG_ENCODING = "wrong_encoding"
    EXTRACTION_FAILED = "extraction_failed"
    INFRA_ERROR = "infra_error"


@dataclass(frozen=True)
class EvalTask:
    id: str
    prompt: str
    spec: DesignSpec


@dataclass(frozen=True)
class PromptGrade:
    id: str
    family: str
    grade: Grade
    detail: str = ""
    structural_match: bool | None = None
    completion_tokens: int = 0


@dataclass(frozen=True)
class EvalRunReport:
    grades: tuple[PromptGrade, ...]
    ks: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.grades)

    @property
    def c(self) -> int:
        return sum(1 for g in self.grades if g.grade is Grade.CORRECT)

    def per_family(self) -> dict[str, tuple[int, int]]:
        """family -> (correct, total)"""
        table: dict[str, list[int]] = {}
        for g in self.grades:
            row = table.setdefault(g.family, [0, 0])
            row[1] += 1
            row[0] += int(g.grade is Grade.CORRECT)
        return {fam: (c, n) for fam, (c, n) in sorted(table.items())}

    def pass_table(self) -> dict[int, float]:
        return {k: pass_at_k(self.n, self.c, k) for k in self.ks}

    def to_text(self) -> str:
        lines = [f"{'id':40} {'family':12} {'grade':18} structural"]
        for g in self.grades:
            structural = "-" if g.structural_match is None else ("match" if g.structural_match else "mismatch")
            lines.append(f"{g.id:40} {g.family:12} {g.grade.value:18} {structural}")
        lines.append("")
        for fam, (c, n) in self.per_family().items():
            lines.append(f"family {fam:12} correct {c}/{n}")
        lines.append(f"overall correct {self.c}/{self.n}")
        for k, value in self.pass_table().items():
            lines.append(f"pass@{k} = {value:.4f}")
        return "\n".join(lines) + "\n"

    def to_json_lines(self) -> str:
        lines = []
        for g in self.grades:
            lines.append(json.dumps({
                "id": g.id, "family": g.family, "grade": g.grade.value,
                "structural_match": g.structural_match, "detail": g.detail,
                "completion_tokens": g.completion_tokens,
            }))
        lines.append(json.dumps({
            "n": self.n, "c": self.c,
            "per_family": {fam: {"c": c, "n": n} for fam, (c, n) in self.per_family().items()},
            "pass_at_k": {str(k): v for k, v in self.pass_table().items()},
        }))
        return "\n".join(lines) + "\n"


def grade_completion(task: EvalTask, raw: str) -> PromptGrade:
    """Extract, rebuild and verify one completion against its golden design."""
    from .llm import extract_plf

    golden = generate_design(task.spec)
    tokens = count_tokens(raw).count
    try:
        document = extract_plf(raw)
    except (NoFormulaFound, PartialParse) as e:
        return PromptGrade(task.id, task.spec.family.value, Grade.EXTRACTION_FAILED, str(e),
                           completion_tokens=tokens)
    hints = IoHints(golden.name, golden.inputs, golden.outputs)
    try:
        candidate = plf_to_circuit(document, hints)
    except VeritasError as e:
        return PromptGrade(task.id, task.spec.family.value, Grade.WRONG_ENCODING, str(e),
                           completion_tokens=tokens)
    structural: bool | None = None
    try:
        structural = check_cnf_equivalence(tseytin_encode(candidate), tseytin_encode(golden)).match
    except (NotComparable, SynthesisError):
        structural = False
    verdict = check_circuit_equivalence(candidate, golden)
    if not verdict.equivalent:
        stimulus = {k: int(v) for k, v in (verdict.counterexample or {}).items()}
        return PromptGrade(task.id, task.spec.family.value, Grade.WRONG_ENCODING,
                           f"not equivalent, e.g. at {stimulus}", structural, tokens)
    return PromptGrade(task.id, task.spec.family.value, Grade.CORRECT, "", structural, tokens)


def run_eval(
    tasks: list[EvalTask],
    backend: Backend,
    params: GenerationParams = GenerationParams(),
    ks: tuple[int, ...] = (1, 5, 10),
    max_in_flight: int = 4,
) -> EvalRunReport:
    """prompts -> completions -> PLF -> circuit -> equivalence grades."""
    ks = tuple(k for k in ks if 1 <= k <= len(tasks))
    completions = generate_many([t.prompt for t in tasks], params, backend, max_in_flight)
    grades: list[PromptGrade] = []
    for task, outcome in zip(tasks, completions):
        if isinstance(outcome, (GenerationTimeout, HttpError, AuthError)):
            grades.append(PromptGrade(task.id, task.spec.family.value, Grade.INFRA_ERROR, str(outcome)))
        elif isinstance(outcome, Exception):
            raise outcome
        else:
            grades.append(grade_completion(task, outcome))
    return EvalRunReport(tuple(grades), ks)


# ---------------------------------------------------------------------------
# token economy

@dataclass(frozen=True)
class TokenRow:
    design: str
    variant: str
    tokens_plf: int
    tokens_tseytin: int

    @property
    def ratio(self) -> float:
        return self.tokens_tseytin / self.tokens_plf


def token_report(specs: list[DesignSpec]) -> list[TokenRow]:
    """PLF vs Tseytin clause-text token counts per design, ratio = tseytin/plf."""
    rows = []
    for spec in specs:
        circuit = generate_design(spec)
        plf_tokens = count_tokens(emit_plf(plf_encode(circuit))).count
        tseytin_tokens = count_tokens(dimacs_clause_text(tseytin_encode(circuit))).count
        rows.append(TokenRow(spec.module_name, spec.variant, plf_tokens, tseytin_tokens))
    return rows


def token_report_text(rows: list[TokenRow]) -> str:
    lines = [f"{'design':20} {'variant':10} {'plf':>8} {'tseytin':>8} {'ratio':>7}"]
    for r in rows:
        lines.append(f"{r.design:20} {r.variant:10} {r.tokens_plf:>8} {r.tokens_tseytin:>8} {r.ratio:>7.2f}")
    return "\n".join(lines) + "\n"
