"""CNF-guided combinational logic toolkit.

Netlists in and out of Tseytin CNF and propositional-logic-formula (PLF)
encodings, a deterministic SAT engine, miter-based equivalence checking,
structural encoding comparison, correct-by-construction Verilog
reconstruction, a verified corpus of standard RTL components, and a
pass@k evaluation harness for text-generation backends.
"""

from .bench import emit_bench, parse_bench
from .circuit import (
    Circuit, Gate, GateType, ValidationReport, canonical, simulate, topo_order,
    validate_circuit,
)
from .cnf import Clause, CnfFormula, Literal, emit_dimacs, parse_dimacs
from .corpus import (
    DesignSpec, Family, SplitConfig, default_grid, generate_corpus, generate_design,
    golden_encodings, render_prompt,
)
from .encode import TokenCount, count_tokens, plf_encode, plf_to_cnf, tseytin_encode
from .equivalence import (
    CnfMatchReport, EquivVerdict, build_miter, check_circuit_equivalence,
    check_cnf_equivalence,
)
from .evaluate import EvalRunReport, EvalTask, pass_at_k, run_eval, token_report
from .llm import (
    EndpointConfig, GenerationParams, HttpBackend, MockBackend, extract_plf, generate,
)
from .plf import PlfDocument, PlfEntry, emit_plf, parse_plf
from .sat import SatResult, SolverStats, brute_force_solve, solve
from .synthesis import (
    IoHints, PortRef, TopRecipe, extract_circuit_from_cnf, plf_to_circuit, stitch_top,
    synthesize_verilog,
)
from .verilog import emit_verilog, parse_structural_verilog

__version__ = "0.1.0"
