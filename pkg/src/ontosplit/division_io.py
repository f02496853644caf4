"""Writing a division to disk and reading it back.

Layout: one ``task_%03d`` directory per subtask holding ``source.ofn``,
``target.ofn`` and ``seed_mappings.tsv``, plus a ``manifest.json``. The
manifest is deterministic except for its ``run`` block, which carries the
timestamp and wall-clock phase timings of the producing run.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import __version__
from .alignio import serialize_alignment
from .division import Division, module_to_ontology
from .metrics import division_size_ratio, task_size_ratio
from .model import Ontology
from .ofn import ParserConfig, parse_ontology, serialize_ontology

TOOL_NAME = "ontosplit"


def _task_dir_name(position: int) -> str:
    return "task_%03d" % position


def build_manifest(
    division: Division,
    source_path: Optional[str] = None,
    target_path: Optional[str] = None,
    invocation: Optional[dict] = None,
) -> dict:
    normalization = dataclasses.asdict(division.config)
    normalization["stop_words"] = sorted(division.config.stop_words)
    hyperparams = (
        dataclasses.asdict(division.hyperparams) if division.hyperparams else None
    )
    tasks = []
    for position, sub in enumerate(division.subtasks, start=1):
        tasks.append(
            {
                "dir": _task_dir_name(position),
                "cluster": sub.cluster_id,
                "source_signature": len(sub.source_module.signature),
                "target_signature": len(sub.target_module.signature),
                "seed_mappings": len(sub.seed_mappings),
                "skipped_entries": len(sub.skipped_keys),
                "empty": len(sub.seed_mappings) == 0,
                "size_ratio": task_size_ratio(sub, division.task),
            }
        )
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "strategy": division.strategy,
        "n": division.n,
        "seed": division.seed,
        "source": source_path,
        "target": target_path,
        "config": {"normalization": normalization, "hyperparams": hyperparams},
        "invocation": invocation,
        "tasks": tasks,
        "size_ratio": division_size_ratio(division),
        "run": {
            "created": datetime.now(timezone.utc).isoformat(),
            "timings_ms": dict(division.timings_ms),
        },
    }


def write_division(
    division: Division,
    directory,
    source_path: Optional[str] = None,
    target_path: Optional[str] = None,
    invocation: Optional[dict] = None,
) -> dict:
    """Write all subtask files and the manifest; returns the manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for position, sub in enumerate(division.subtasks, start=1):
        task_dir = directory / _task_dir_name(position)
        task_dir.mkdir(exist_ok=True)
        source_onto = module_to_ontology(sub.source_module, division.task.source)
        target_onto = module_to_ontology(sub.target_module, division.task.target)
        (task_dir / "source.ofn").write_text(serialize_ontology(source_onto), encoding="utf-8")
        (task_dir / "target.ofn").write_text(serialize_ontology(target_onto), encoding="utf-8")
        (task_dir / "seed_mappings.tsv").write_text(
            serialize_alignment(sub.seed_mappings, division.task.source, division.task.target),
            encoding="utf-8",
        )
    manifest = build_manifest(division, source_path, target_path, invocation)
    (directory / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


@dataclass(frozen=True)
class LoadedSubtask:
    directory: str
    source: Ontology
    target: Ontology


@dataclass(frozen=True)
class LoadedDivision:
    manifest: dict
    subtasks: tuple[LoadedSubtask, ...]


def read_division(directory, parser_config: Optional[ParserConfig] = None) -> LoadedDivision:
    """Load a division directory: the manifest plus each subtask's ontologies."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"not a division directory: {directory} (no manifest.json)")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    config = parser_config or ParserConfig()
    subtasks = []
    for task in manifest["tasks"]:
        task_dir = directory / task["dir"]
        source = parse_ontology((task_dir / "source.ofn").read_text(encoding="utf-8"), config)
        target = parse_ontology((task_dir / "target.ofn").read_text(encoding="utf-8"), config)
        subtasks.append(LoadedSubtask(task["dir"], source, target))
    return LoadedDivision(manifest, tuple(subtasks))
