#!/usr/bin/env python3
"""Large-input smoke run: generate a 50k-class pair, divide it into 20
subtasks through the CLI path, and report wall time and peak memory."""

import argparse
import resource
import sys
import tempfile
import time
from pathlib import Path

from ontosplit.cli import main as cli_main
from ontosplit.ofn import serialize_ontology
from ontosplit.synth import synthetic_pair


def run(n_classes: int, n_subtasks: int, strategy: str, seed: int, keep: str | None) -> int:
    workdir = Path(keep) if keep else Path(tempfile.mkdtemp(prefix="ontosplit-scale-"))
    workdir.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    task = synthetic_pair(seed, n_classes, n_classes, families=16, words_per_family=400)
    source = workdir / "source.ofn"
    target = workdir / "target.ofn"
    source.write_text(serialize_ontology(task.source), encoding="utf-8")
    target.write_text(serialize_ontology(task.target), encoding="utf-8")
    print(f"generated {n_classes}x{n_classes} classes in {time.perf_counter() - start:.1f}s")

    start = time.perf_counter()
    code = cli_main([
        "divide",
        "--source", str(source),
        "--target", str(target),
        "--n", str(n_subtasks),
        "--strategy", strategy,
        "--seed", str(seed),
        "--out", str(workdir / "division"),
    ])
    elapsed = time.perf_counter() - start
    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / (1024 * 1024)
    print(f"divide --n {n_subtasks} ({strategy}): exit {code}, {elapsed:.1f}s wall, "
          f"peak RSS {peak_gb:.2f} GB")
    print(f"bounds: < 300 s and < 8 GB -> "
          f"{'within' if elapsed < 300 and peak_gb < 8 else 'EXCEEDED'}")
    print(f"artifacts in {workdir}")
    return code


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classes", type=int, default=50_000)
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--strategy", default="naive")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--keep", default=None, help="directory to keep the artifacts in")
    args = parser.parse_args()
    sys.exit(run(args.classes, args.n, args.strategy, args.seed, args.keep))
