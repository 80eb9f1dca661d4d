"""Command-line entry point tying the pipeline together.

Every subcommand is a thin shell over library calls.  Exit codes: 0 success,
1 usage error, 2 input error (unreadable/unparseable program), 3 execution
error.  IMPLANG_OUT_DIR sets the default output directory.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import fuzzer as fuzz_mod
from . import metrics as metrics_mod
from .mutation import MutationKind, SemanticsStyle, run_with, transform_program
from .runtime import DEFAULT_STEP_LIMIT, Outcome, render_store
from .scoring import score_batch
from .syntax import ParseError, UnknownLexeme, parse, render_program
from .tasks import TaskInstance, build_instance, trace_to_xml
from .tokens import OBFUSCATED, STANDARD


EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_EXEC = 3


@dataclass(frozen=True)
class PipelineConfig:
    """Defaults reproducing the benchmark setup: both semantics styles, all
    three mutations, a one-million-step budget."""

    styles: tuple[str, ...] = ("sos", "k")
    mutations: tuple[str, ...] = ("std", "swap", "obf")
    step_limit: int = DEFAULT_STEP_LIMIT
    seed: int = 0
    granularity: str = "stmt"

    def matrix(self) -> list[tuple[str, str]]:
        return [(s, m) for s in self.styles for m in self.mutations]


class InputError(Exception):
    pass


def _default_out() -> str:
    return os.environ.get("IMPLANG_OUT_DIR", ".")


def _mutation(name: str) -> MutationKind:
    return {"std": MutationKind.STANDARD, "swap": MutationKind.KEYWORD_SWAP,
            "obf": MutationKind.KEYWORD_OBF}[name]


def _style(name: str) -> SemanticsStyle:
    return SemanticsStyle.SOS if name == "sos" else SemanticsStyle.K


def _load_program(path: str, kind: MutationKind):
    profile = OBFUSCATED if kind is MutationKind.KEYWORD_OBF else STANDARD
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return parse(source, profile)
    except (ParseError, UnknownLexeme) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _cmd_run(args) -> int:
    p = _load_program(args.file, _mutation(args.mutation))
    trace = run_with(
        p, _style(args.style), _mutation(args.mutation), args.step_limit
    )
    if args.trace == "xml":
        print(trace_to_xml(trace))
    elif args.trace == "debug":
        from .mutation import operator_actions
        from .sos import debug_lines

        if _style(args.style) is not SemanticsStyle.SOS:
            print("error: --trace debug is a small-step view", file=sys.stderr)
            return EXIT_USAGE
        for line in debug_lines(p, args.step_limit,
                                operator_actions(_mutation(args.mutation))):
            print(line)
    if trace.outcome is Outcome.STEP_LIMIT:
        print("outcome: step_limit", file=sys.stderr)
        return EXIT_EXEC
    if args.json:
        print(json.dumps({
            "outcome": trace.outcome.value,
            "final_store": {k: v for k, v in trace.final_store.items()},
            "steps": len(trace.steps),
        }))
    elif args.trace == "none":
        print(f"outcome: {trace.outcome.value}")
        print(f"final store: {render_store(trace.final_store)}")
    return 0


def _cmd_fuzz(args) -> int:
    cfg = fuzz_mod.FuzzConfig()
    overrides = {}
    for knob in ("min_variables", "max_variables", "min_block_depth",
                 "max_block_depth", "min_stmts_per_block", "max_stmts_per_block"):
        value = getattr(args, knob)
        if value is not None:
            overrides[knob] = value
    if overrides:
        cfg = replace(cfg, **overrides)
    manifest = fuzz_mod.generate_corpus(
        cfg, args.count, args.seed, args.out, args.step_limit
    )
    print(json.dumps({
        "count": manifest["count"],
        "raw_samples": manifest["raw_samples"],
        "rejection_rate": manifest["rejection_rate"],
        "out": str(args.out),
    }))
    return 0


def _program_paths(target: str) -> list[Path]:
    path = Path(target)
    if path.is_dir():
        return sorted(path.glob("*.imp"))
    return [path]


def _cmd_metrics(args) -> int:
    records = []
    paths = _program_paths(args.target)
    if not paths:
        raise InputError(f"no .imp programs under {args.target}")
    for path in paths:
        p = _load_program(str(path), MutationKind.STANDARD)
        try:
            prof = metrics_mod.profile(p, args.step_limit, args.granularity)
        except Exception as exc:
            raise InputError(f"{path}: {exc}") from exc
        records.append(prof.as_record(path.stem))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(records[0]))
            writer.writeheader()
            writer.writerows(records)
    if args.json or not args.csv:
        print(json.dumps(records if len(records) > 1 else records[0], indent=2))
    return 0


def _cmd_mutate(args) -> int:
    p = _load_program(args.file, MutationKind.STANDARD)
    kind = _mutation(args.kind)
    out = render_program(
        transform_program(p, kind),
        OBFUSCATED if kind is MutationKind.KEYWORD_OBF else STANDARD,
    )
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        print(out, end="")
    return 0


def _cmd_gen_tasks(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.matrix:
        configs = PipelineConfig(seed=args.seed, step_limit=args.step_limit).matrix()
    else:
        configs = [(args.style, args.mutation)]
    datasets = []
    for style_name, mutation_name in configs:
        style = None if args.no_semantics else _style(style_name)
        kind = _mutation(mutation_name)
        lines = []
        for path in _program_paths(args.programs):
            p = _load_program(str(path), MutationKind.STANDARD)
            try:
                inst = build_instance(
                    path.stem, p, args.task, style, kind,
                    cot=args.cot, seed=args.seed, step_limit=args.step_limit,
                )
            except Exception as exc:
                raise InputError(f"{path}: {exc}") from exc
            lines.append(inst.to_json())
            if args.task == "trace":
                xml_path = out_dir / f"{inst.instance_id}.xml"
                xml_path.write_text(inst.gold["xml"] + "\n", encoding="utf-8")
        dataset = out_dir / f"{args.task}.{style_name}.{mutation_name}.jsonl"
        dataset.write_text("\n".join(lines) + "\n", encoding="utf-8")
        datasets.append({"dataset": str(dataset), "instances": len(lines)})
    print(json.dumps(datasets if args.matrix else datasets[0]))
    return 0


def _cmd_score(args) -> int:
    instances = []
    with open(args.gold, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                instances.append(TaskInstance.from_json(line))
    responses: dict[str, str] = {}
    with open(args.responses, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                responses[rec["instance_id"]] = rec["response_text"]
    report = score_batch(instances, responses)
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    if args.csv and report.category_rates:
        report.write_category_csv(args.csv)
    print(report.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(prog="implang")
    sub = root.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a program")
    run_p.add_argument("file")
    run_p.add_argument("--style", choices=("sos", "k"), default="sos")
    run_p.add_argument("--mutation", choices=("std", "swap", "obf"), default="std")
    run_p.add_argument("--trace", choices=("none", "xml", "debug"), default="none")
    run_p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    run_p.add_argument("--json", action="store_true")
    run_p.set_defaults(func=_cmd_run)

    fuzz_p = sub.add_parser("fuzz", help="generate a program corpus")
    fuzz_p.add_argument("--count", type=int, required=True)
    fuzz_p.add_argument("--seed", type=int, default=0)
    fuzz_p.add_argument("--out", default=_default_out())
    fuzz_p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    for knob in ("min-variables", "max-variables", "min-block-depth",
                 "max-block-depth", "min-stmts-per-block", "max-stmts-per-block"):
        fuzz_p.add_argument(f"--{knob}", type=int, default=None,
                            dest=knob.replace("-", "_"))
    fuzz_p.set_defaults(func=_cmd_fuzz)

    met_p = sub.add_parser("metrics", help="complexity profile of programs")
    met_p.add_argument("target", help=".imp file or directory")
    met_p.add_argument("--granularity", choices=("micro", "stmt"), default="stmt")
    met_p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    met_p.add_argument("--json", action="store_true")
    met_p.add_argument("--csv")
    met_p.set_defaults(func=_cmd_metrics)

    mut_p = sub.add_parser("mutate", help="emit the transformed program")
    mut_p.add_argument("file")
    mut_p.add_argument("--kind", choices=("swap", "obf"), required=True)
    mut_p.add_argument("--out")
    mut_p.set_defaults(func=_cmd_mutate)

    gen_p = sub.add_parser("gen-tasks", help="build task datasets with gold answers")
    gen_p.add_argument("programs", help=".imp file or directory")
    gen_p.add_argument("--task", choices=("state", "rule", "trace"), required=True)
    gen_p.add_argument("--style", choices=("sos", "k"), default="sos")
    gen_p.add_argument("--mutation", choices=("std", "swap", "obf"), default="std")
    gen_p.add_argument("--no-semantics", action="store_true")
    gen_p.add_argument("--matrix", action="store_true",
                       help="emit every style/mutation configuration")
    gen_p.add_argument("--cot", action="store_true")
    gen_p.add_argument("--seed", type=int, default=0)
    gen_p.add_argument("--step-limit", type=int, default=DEFAULT_STEP_LIMIT)
    gen_p.add_argument("--out", default=_default_out())
    gen_p.set_defaults(func=_cmd_gen_tasks)

    score_p = sub.add_parser("score", help="score model responses against gold")
    score_p.add_argument("--task", choices=("state", "rule", "trace"), required=True)
    score_p.add_argument("--gold", required=True, help="gold dataset JSONL")
    score_p.add_argument("--responses", required=True, help="responses JSONL")
    score_p.add_argument("--report")
    score_p.add_argument("--csv")
    score_p.set_defaults(func=_cmd_score)
    return root


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - surface as execution error
        print(f"execution error: {exc}", file=sys.stderr)
        return EXIT_EXEC


if __name__ == "__main__":
    sys.exit(main())
