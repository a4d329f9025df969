"""Command-line umbrella for the toolkit.

    veritas encode   circuit file -> PLF or DIMACS text
    veritas synth    PLF/CNF + I/O hints -> Verilog (optionally .bench)
    veritas check    candidate CNF vs golden CNF, structural match
    veritas cec      two circuit files, miter-SAT equivalence
    veritas sat      DIMACS file -> verdict and model
    veritas corpus   generate the verified corpus file + manifest
    veritas infer    prompts through a backend -> completions file
    veritas eval     end-to-end graded evaluation with pass@k
    veritas tokens   PLF vs Tseytin token-economy table
    veritas simulate circuit file on one input assignment

Exit codes: 0 success, 1 graded failure (mismatch / not equivalent /
incorrect completions), 2 usage or infrastructure error.
"""

from __future__ import annotations

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import corpus as corpus_mod
from .bench import emit_bench, parse_bench
from .circuit import simulate
from .cnf import emit_dimacs, parse_dimacs
from .encode import count_tokens, plf_encode, tseytin_encode
from .equivalence import check_circuit_equivalence, check_cnf_equivalence
from .errors import NotComparable, VeritasError
from .evaluate import EvalTask, run_eval, token_report, token_report_text
from .llm import GenerationParams, backend_from_config, generate_many
from .plf import emit_plf, parse_plf
from .synthesis import IoHints, extract_circuit_from_cnf, plf_to_circuit, synthesize_verilog
from .verilog import emit_verilog, parse_structural_verilog


def _load_circuit(path: str):
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".bench"):
        return parse_bench(text)
    return parse_structural_verilog(text)


def _load_hints(path: str) -> IoHints:
    with open(path) as fh:
        raw = json.load(fh)
    return IoHints(raw["name"], tuple(raw["inputs"]), tuple(raw["outputs"]))


def _parse_params(text: str) -> GenerationParams:
    values: dict[str, float] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        values[key.strip()] = float(value)
    return GenerationParams(
        temperature=values.get("t", values.get("temperature", 0.0)),
        top_p=values.get("top_p", 1.0),
        max_tokens=int(values.get("max_tokens", 1200)),
    )


def _load_backend(path: str):
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return backend_from_config(raw)


def _cmd_encode(args) -> int:
    circuit = _load_circuit(args.circuit)
    if args.kind == "plf":
        text = emit_plf(plf_encode(circuit))
    else:
        text = emit_dimacs(tseytin_encode(circuit))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_synth(args) -> int:
    hints = _load_hints(args.io)
    if args.plf:
        with open(args.plf) as fh:
            source = parse_plf(fh.read())
    else:
        with open(args.cnf) as fh:
            source = parse_dimacs(fh.read())
    verilog = synthesize_verilog(source, hints)
    with open(args.out, "w") as fh:
        fh.write(verilog)
    if args.emit_bench:
        circuit = plf_to_circuit(source, hints) if args.plf else extract_circuit_from_cnf(source, hints)
        with open(args.emit_bench, "w") as fh:
            fh.write(emit_bench(circuit))
    print(f"wrote {args.out}")
    return 0


def _cmd_check(args) -> int:
    with open(args.golden) as fh:
        golden = parse_dimacs(fh.read())
    with open(args.candidate) as fh:
        candidate = parse_dimacs(fh.read())
    try:
        report = check_cnf_equivalence(candidate, golden)
    except NotComparable as e:
        if args.format == "json-lines":
            print(json.dumps({"verdict": "not_comparable", "reason": str(e)}))
        else:
            print(f"NOT COMPARABLE: {e}")
        return 2
    if args.format == "json-lines":
        print(json.dumps({
            "verdict": "match" if report.match else "mismatch",
            "diagnostics": [{"kind": d.kind.value, "detail": d.detail} for d in report.diagnostics],
            "witness": {str(k): v for k, v in (report.witness_renaming or {}).items()},
        }))
    else:
        print("MATCH" if report.match else "MISMATCH")
        for d in report.diagnostics:
            print(f"  [{d.kind.value}] {d.detail}")
    return 0 if report.match else 1


def _cmd_cec(args) -> int:
    left = _load_circuit(args.left)
    right = _load_circuit(args.right)
    verdict = check_circuit_equivalence(left, right)
    if args.format == "json-lines":
        print(json.dumps({
            "equivalent": verdict.equivalent,
            "counterexample": {k: int(v) for k, v in (verdict.counterexample or {}).items()} or None,
        }))
    elif verdict.equivalent:
        print("EQUIVALENT")
    else:
        stimulus = {k: int(v) for k, v in (verdict.counterexample or {}).items()}
        print(f"NOT EQUIVALENT at {stimulus}")
    return 0 if verdict.equivalent else 1


def _cmd_sat(args) -> int:
    from .sat import solve

    with open(args.cnf) as fh:
        formula = parse_dimacs(fh.read())
    result, stats = solve(formula)
    if result.satisfiable:
        print("SATISFIABLE")
        model = result.model or {}
        print("v " + " ".join(str(v if model[v] else -v) for v in sorted(model)) + " 0")
    else:
        print("UNSATISFIABLE")
    print(f"c decisions={stats.decisions} propagations={stats.propagations} conflicts={stats.conflicts}")
    return 0


def _cmd_corpus(args) -> int:
    if args.grid == "default":
        specs = list(corpus_mod.default_grid(args.seed))
    else:
        raise VeritasError(f"unknown grid '{args.grid}'")
    if args.families:
        wanted = {f.strip() for f in args.families.split(",")}
        specs = [s for s in specs if s.family.value in wanted]
    encodings = ("plf", "tseytin") if args.encodings == "both" else (args.encodings,)
    fractions = tuple(float(f) for f in args.split.split(","))
    if len(fractions) != 3:
        raise VeritasError("--split needs three comma-separated fractions")
    cfg = corpus_mod.SplitConfig(fractions, args.seed)
    manifest = corpus_mod.generate_corpus(specs, args.out, encodings, cfg)
    print(f"wrote {manifest.total} records to {manifest.path}")
    print(f"splits: {manifest.by_split}")
    return 0


def _cmd_infer(args) -> int:
    backend = _load_backend(args.endpoint)
    params = _parse_params(args.params)
    with open(args.prompts) as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    results = generate_many([r["prompt"] for r in records], params, backend)
    infra_errors = 0
    with open(args.out, "w") as fh:
        for record, outcome in zip(records, results):
            if isinstance(outcome, Exception):
                infra_errors += 1
                fh.write(json.dumps({"id": record["id"], "error": str(outcome)}) + "\n")
            else:
                fh.write(json.dumps({"id": record["id"], "completion": outcome}) + "\n")
    print(f"wrote {len(records)} completions to {args.out} ({infra_errors} failed)")
    return 2 if infra_errors else 0


def _load_tasks(prompts_path: str, manifest_path: str | None) -> list[EvalTask]:
    with open(prompts_path) as fh:
        prompt_records = [json.loads(line) for line in fh if line.strip()]
    spec_fields: dict[str, dict] = {}
    if manifest_path:
        with open(manifest_path) as fh:
            for line in fh:
                if line.strip():
                    record = json.loads(line)
                    spec_fields[record["id"]] = record
    tasks = []
    for record in prompt_records:
        meta = spec_fields.get(record["id"], record)
        spec = corpus_mod.DesignSpec(
            corpus_mod.Family(meta["family"]), meta["width"], meta["variant"])
        tasks.append(EvalTask(record["id"], record["prompt"], spec))
    return tasks


def _cmd_eval(args) -> int:
    backend = _load_backend(args.endpoint)
    params = _parse_params(args.params)
    ks = tuple(int(k) for k in args.k.split(","))
    tasks = _load_tasks(args.prompts, args.manifest)
    report = run_eval(tasks, backend, params, ks)
    text = report.to_text()
    sys.stdout.write(text if args.format == "text" else report.to_json_lines())
    if args.out:
        with open(args.out + ".txt", "w") as fh:
            fh.write(text)
        with open(args.out + ".jsonl", "w") as fh:
            fh.write(report.to_json_lines())
    if any(g.grade.value == "infra_error" for g in report.grades):
        return 2
    return 0 if report.c == report.n else 1


def _cmd_tokens(args) -> int:
    specs = list(corpus_mod.default_grid(args.seed))
    if args.families:
        wanted = {f.strip() for f in args.families.split(",")}
        specs = [s for s in specs if s.family.value in wanted]
    rows = token_report(specs)
    if args.format == "json-lines":
        for r in rows:
            print(json.dumps({"design": r.design, "variant": r.variant,
                              "tokens_plf": r.tokens_plf, "tokens_tseytin": r.tokens_tseytin,
                              "ratio": round(r.ratio, 4)}))
    else:
        sys.stdout.write(token_report_text(rows))
    return 0


def _cmd_simulate(args) -> int:
    circuit = _load_circuit(args.circuit)
    stimulus = {}
    for part in args.inputs.split(","):
        net, _, value = part.partition("=")
        stimulus[net.strip()] = bool(int(value))
    outputs = simulate(circuit, stimulus)
    if args.format == "json-lines":
        print(json.dumps({net: int(v) for net, v in outputs.items()}))
    else:
        for net in circuit.outputs:
            print(f"{net} = {int(outputs[net])}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="veritas", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seed", type=int, default=0, help="seed for corpus/splits")
    parser.add_argument("--format", choices=("text", "json-lines"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a circuit as PLF or DIMACS")
    p.add_argument("circuit")
    p.add_argument("--kind", choices=("plf", "tseytin"), default="plf")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("synth", help="reconstruct Verilog from PLF or CNF")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--plf")
    group.add_argument("--cnf")
    p.add_argument("--io", required=True, help="JSON file {name, inputs, outputs}")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--emit-bench")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("check", help="structural CNF-vs-CNF comparison")
    p.add_argument("--golden", required=True)
    p.add_argument("--candidate", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("cec", help="miter-SAT circuit equivalence")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=_cmd_cec)

    p = sub.add_parser("sat", help="solve a DIMACS file")
    p.add_argument("cnf")
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("corpus", help="generate the verified corpus")
    p.add_argument("--grid", default="default")
    p.add_argument("--families", help="comma-separated subset, e.g. adder,mux")
    p.add_argument("--encodings", choices=("plf", "tseytin", "both"), default="both")
    p.add_argument("--split", default="0.8,0.1,0.1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("infer", help="run prompts through a backend")
    p.add_argument("--prompts", required=True)
    p.add_argument("--endpoint", required=True, help="TOML backend config")
    p.add_argument("--params", default="t=0.0,top_p=1.0,max_tokens=1200")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("eval", help="graded end-to-end evaluation")
    p.add_argument("--prompts", required=True)
    p.add_argument("--manifest", help="JSONL with family/width/variant per id (defaults to prompts file)")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--params", default="t=0.0,top_p=1.0,max_tokens=1200")
    p.add_argument("--k", default="1,5,10")
    p.add_argument("--out", help="report path prefix (.txt and .jsonl)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("tokens", help="PLF vs Tseytin token economy")
    p.add_argument("--families")
    p.set_defaults(func=_cmd_tokens)

    p = sub.add_parser("simulate", help="evaluate a circuit on one input vector")
    p.add_argument("circuit")
    p.add_argument("--inputs", required=True, help="comma-separated net=bit list")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VeritasError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
