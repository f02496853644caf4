"""Command-line front end.

Subcommands: divide, coverage, evaluate, lexindex, stats. Exit codes are a
stable contract: 0 success, 1 runtime failure (one machine-parsable line on
stderr), 2 usage error. All randomness flows from --seed; the environment
variable ONTOSPLIT_CONFIG may point at a JSON file of default option values.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .alignio import AlignmentFormatError, parse_alignment
from .division import DivisionError, divide_task, make_task
from .division_io import read_division, write_division
from .embedding import HyperParams, save_model
from .lexindex import NormalizationConfig, build_index, derive_mappings, dump_index
from .metrics import merge_alignments, precision_recall_f
from .ofn import ParseError, ParserConfig, parse_ontology


@dataclass(frozen=True)
class RunConfig:
    """Resolved divide options; written verbatim into the manifest."""

    source: str
    target: str
    out: str
    n: int
    strategy: str
    seed: int
    threads: int
    delta: int
    max_subsets_per_label: int
    max_mappings_per_entry: Optional[int]
    stemming: bool
    classes_only: bool
    dim: int
    epochs: int
    learning_rate: float
    negatives_per_positive: int
    margin: float
    negative_pool: str


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return number


def _nonnegative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return number


def _strategy(value: str) -> str:
    canonical = {"naive": "naive", "embedding": "embedding", "embed": "embedding"}
    if value not in canonical:
        raise argparse.ArgumentTypeError(f"unknown strategy {value!r}")
    return canonical[value]


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--source", required=True, help="source ontology (.ofn)")
    parser.add_argument("--target", required=True, help="target ontology (.ofn)")


def _add_normalization_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=_nonnegative_int, default=1,
                        help="subset keys keep at least max(1, |words|-delta) words")
    parser.add_argument("--max-subsets", type=_positive_int, default=32,
                        dest="max_subsets_per_label")
    parser.add_argument("--max-mappings-per-entry", type=_positive_int, default=None)
    parser.add_argument("--no-stemming", action="store_false", dest="stemming")
    parser.add_argument("--index-all-kinds", action="store_false", dest="classes_only",
                        help="index properties and individuals besides classes")


def _add_embedding_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=_positive_int, default=64)
    parser.add_argument("--epochs", type=_nonnegative_int, default=25)
    parser.add_argument("--learning-rate", type=float, default=0.01)
    parser.add_argument("--negatives", type=_positive_int, default=5,
                        dest="negatives_per_positive")
    parser.add_argument("--margin", type=float, default=0.05)
    parser.add_argument("--negative-pool", choices=("both", "same-side"), default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontosplit",
        description="Divide an ontology matching task into smaller subtasks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    divide = sub.add_parser("divide", help="write a division of the matching task")
    _add_pair_arguments(divide)
    divide.add_argument("--n", type=_positive_int, required=True,
                        help="number of matching subtasks")
    divide.add_argument("--strategy", type=_strategy, default="naive",
                        help="naive | embedding")
    divide.add_argument("--seed", type=int, default=0)
    divide.add_argument("--out", required=True, help="division output directory")
    divide.add_argument("--threads", type=_positive_int, default=1)
    divide.add_argument("--dump-model", default=None,
                        help="write the trained embedding model to this path")
    _add_normalization_arguments(divide)
    _add_embedding_arguments(divide)

    coverage_cmd = sub.add_parser("coverage", help="coverage of an alignment by a division")
    coverage_cmd.add_argument("--division", required=True)
    coverage_cmd.add_argument("--alignment", required=True)
    coverage_cmd.add_argument("--source", default=None,
                              help="override the source ontology recorded in the manifest")
    coverage_cmd.add_argument("--target", default=None)
    coverage_cmd.add_argument("--out", default=None, help="also write the JSON report here")

    evaluate = sub.add_parser("evaluate",
                              help="score merged per-subtask alignments against a reference")
    evaluate.add_argument("outputs", nargs="+", help="per-subtask alignment files")
    evaluate.add_argument("--division", required=True)
    evaluate.add_argument("--reference", required=True)
    evaluate.add_argument("--source", default=None)
    evaluate.add_argument("--target", default=None)
    evaluate.add_argument("--out", default=None)

    lexindex_cmd = sub.add_parser("lexindex", help="dump the lexical index as TSV")
    _add_pair_arguments(lexindex_cmd)
    lexindex_cmd.add_argument("--dump", default=None, help="output path (default stdout)")
    _add_normalization_arguments(lexindex_cmd)

    stats = sub.add_parser("stats", help="index and signature statistics")
    _add_pair_arguments(stats)
    _add_normalization_arguments(stats)

    env_path = os.environ.get("ONTOSPLIT_CONFIG")
    if env_path:
        _apply_env_defaults(parser, sub, env_path)
    return parser


def _apply_env_defaults(parser, sub, env_path: str) -> None:
    try:
        defaults = json.loads(Path(env_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"warning: ignoring ONTOSPLIT_CONFIG ({exc})", file=sys.stderr)
        return
    if not isinstance(defaults, dict):
        print("warning: ONTOSPLIT_CONFIG must hold a JSON object", file=sys.stderr)
        return
    for subparser in sub.choices.values():
        known = {action.dest for action in subparser._actions}
        subparser.set_defaults(**{k: v for k, v in defaults.items() if k in known})


def _normalization_config(args) -> NormalizationConfig:
    return NormalizationConfig(
        stemming=args.stemming,
        delta=args.delta,
        max_subsets_per_label=args.max_subsets_per_label,
        max_mappings_per_entry=args.max_mappings_per_entry,
        classes_only=args.classes_only,
    )


def _hyperparams(args, seed: int) -> HyperParams:
    return HyperParams(
        dim=args.dim,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        negatives_per_positive=args.negatives_per_positive,
        margin=args.margin,
        seed=seed,
        negative_pool=args.negative_pool,
    )


def _load_pair(source_path: str, target_path: str):
    config = ParserConfig()
    source = parse_ontology(Path(source_path).read_text(encoding="utf-8"), config)
    target = parse_ontology(Path(target_path).read_text(encoding="utf-8"), config)
    return make_task(source, target)


def _cmd_divide(args) -> int:
    run_config = RunConfig(
        source=args.source, target=args.target, out=args.out, n=args.n,
        strategy=args.strategy, seed=args.seed, threads=args.threads,
        delta=args.delta, max_subsets_per_label=args.max_subsets_per_label,
        max_mappings_per_entry=args.max_mappings_per_entry,
        stemming=args.stemming, classes_only=args.classes_only, dim=args.dim,
        epochs=args.epochs, learning_rate=args.learning_rate,
        negatives_per_positive=args.negatives_per_positive, margin=args.margin,
        negative_pool=args.negative_pool,
    )
    task = _load_pair(args.source, args.target)
    division = divide_task(
        task,
        n=args.n,
        strategy=args.strategy,
        config=_normalization_config(args),
        seed=args.seed,
        hyperparams=_hyperparams(args, args.seed),
        threads=args.threads,
    )
    write_division(
        division, args.out,
        source_path=args.source, target_path=args.target,
        invocation=dataclasses.asdict(run_config),
    )
    if args.dump_model and division.model is not None:
        save_model(division.model, args.dump_model)
    timings = " | ".join(f"{k} {v:.1f} ms" for k, v in division.timings_ms.items())
    print(f"wrote {division.n} subtasks to {args.out}")
    print(f"timings: {timings}")
    return 0


def _original_pair(manifest: dict, args):
    source_path = args.source or manifest.get("source")
    target_path = args.target or manifest.get("target")
    if not source_path or not target_path:
        raise DivisionError(
            "original ontologies unavailable; pass --source/--target"
        )
    return _load_pair(source_path, target_path)


def _cmd_coverage(args) -> int:
    loaded = read_division(args.division)
    task = _original_pair(loaded.manifest, args)
    document = Path(args.alignment).read_text(encoding="utf-8")
    parsed = parse_alignment(document, task.source, task.target)

    per_task = []
    covered_pairs: set[tuple[int, int]] = set()
    for position, sub in enumerate(loaded.subtasks):
        source_iris = {e.iri for e in sub.source.entities}
        target_iris = {e.iri for e in sub.target.entities}
        task_pairs = {
            m.pair
            for m in parsed.alignment
            if task.source.entity(m.source_id).iri in source_iris
            and task.target.entity(m.target_id).iri in target_iris
        }
        covered_pairs |= task_pairs
        per_task.append({"dir": sub.directory, "covered": len(task_pairs)})
    total = len(parsed.alignment)
    uncovered = sorted(
        (task.source.entity(s).iri, task.target.entity(t).iri)
        for s, t in (m.pair for m in parsed.alignment)
        if (s, t) not in covered_pairs
    )
    report = {
        "coverage_ratio": (len(covered_pairs) / total) if total else None,
        "covered": len(covered_pairs),
        "resolvable_mappings": total,
        "unresolved_rows": [dataclasses.asdict(u) for u in parsed.unresolved],
        "per_task": per_task,
        "uncovered": [list(pair) for pair in uncovered],
        "size_ratio": loaded.manifest.get("size_ratio"),
        "config": loaded.manifest.get("config"),
    }
    _emit_report(report, args.out)
    return 0


def _cmd_evaluate(args) -> int:
    loaded = read_division(args.division)
    task = _original_pair(loaded.manifest, args)
    reference = parse_alignment(
        Path(args.reference).read_text(encoding="utf-8"), task.source, task.target
    )
    if len(reference.alignment) == 0:
        raise DivisionError("reference alignment is empty or fully unresolvable")
    parts = []
    unresolved_outputs = 0
    for path in args.outputs:
        parsed = parse_alignment(
            Path(path).read_text(encoding="utf-8"), task.source, task.target
        )
        unresolved_outputs += len(parsed.unresolved)
        parts.append(parsed.alignment)
    merged, conflicts = merge_alignments(parts)
    precision, recall, f_measure = precision_recall_f(merged, reference.alignment)
    report = {
        "precision": precision,
        "recall": recall,
        "f_measure": f_measure,
        "merged_size": len(merged),
        "reference_size": len(reference.alignment),
        "system_outputs": len(args.outputs),
        "relation_conflicts": len(conflicts),
        "unresolved_reference_rows": len(reference.unresolved),
        "unresolved_output_rows": unresolved_outputs,
        "config": loaded.manifest.get("config"),
    }
    _emit_report(report, args.out)
    return 0


def _cmd_lexindex(args) -> int:
    task = _load_pair(args.source, args.target)
    index = build_index(task.source, task.target, _normalization_config(args))
    rendered = dump_index(index, task.source, task.target)
    if args.dump:
        Path(args.dump).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    if len(index.entries) == 0:
        print("warning: no lexical overlap between the ontologies", file=sys.stderr)
        return 1
    return 0


def _cmd_stats(args) -> int:
    task = _load_pair(args.source, args.target)
    start = time.perf_counter()
    index = build_index(task.source, task.target, _normalization_config(args))
    mappings, _ = derive_mappings(index.entries, args.max_mappings_per_entry)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    print("entries\tmappings\tsource_signature\ttarget_signature\ttime_ms")
    print(
        f"{len(index.entries)}\t{len(mappings)}\t{len(task.source.signature)}"
        f"\t{len(task.target.signature)}\t{elapsed_ms:.1f}"
    )
    if len(index.entries) == 0:
        print("warning: no lexical overlap between the ontologies", file=sys.stderr)
        return 1
    return 0


def _emit_report(report: dict, out_path: Optional[str]) -> None:
    rendered = json.dumps(report, indent=2, sort_keys=True)
    print(rendered)
    if out_path:
        Path(out_path).write_text(rendered + "\n", encoding="utf-8")


_COMMANDS = {
    "divide": _cmd_divide,
    "coverage": _cmd_coverage,
    "evaluate": _cmd_evaluate,
    "lexindex": _cmd_lexindex,
    "stats": _cmd_stats,
}


def _error_code(exc: Exception) -> str:
    if isinstance(exc, ParseError):
        return "parse-error"
    if isinstance(exc, AlignmentFormatError):
        return "alignment-error"
    if isinstance(exc, DivisionError):
        if "no lexical overlap" in str(exc):
            return "no-lexical-overlap"
        return "invalid-division"
    if isinstance(exc, FileNotFoundError):
        return "file-not-found"
    if isinstance(exc, OSError):
        return "io-error"
    return "invalid-input"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, AlignmentFormatError, DivisionError, OSError, ValueError) as exc:
        print(f"error: {_error_code(exc)}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
