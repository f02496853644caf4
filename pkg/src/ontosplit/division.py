"""Orchestration: index construction, clustering, per-cluster candidate
mappings, locality contexts, and the resulting matching subtasks."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .clustering import STRATEGIES, cluster_entries
from .embedding import EmbeddingModel, HyperParams, train_embeddings
from .lexindex import (
    Key,
    LexicalIndex,
    NormalizationConfig,
    build_index,
    derive_mappings,
)
from .locality import Module, extract_module
from .metrics import Alignment
from .model import Ontology


class DivisionError(RuntimeError):
    """A division request that cannot be satisfied."""


@dataclass(frozen=True)
class MatchingTask:
    source: Ontology
    target: Ontology

    def __post_init__(self):
        shared = self.source.signature & self.target.signature
        if shared:
            raise ValueError(
                f"source and target id spaces overlap on {len(shared)} ids; "
                "build tasks with make_task()"
            )


def make_task(source: Ontology, target: Ontology) -> MatchingTask:
    """Pair two freshly parsed ontologies, moving the target ids after the
    source ids so the combined id space is dense and disjoint."""
    return MatchingTask(source, target.with_id_offset(len(source.entities)))


@dataclass(frozen=True)
class MatchingSubtask:
    cluster_id: int
    source_module: Module
    target_module: Module
    seed_mappings: Alignment
    skipped_keys: tuple[Key, ...] = ()

    def __post_init__(self):
        for m in self.seed_mappings:
            if (
                m.source_id not in self.source_module.signature
                or m.target_id not in self.target_module.signature
            ):
                raise ValueError("seed mapping escapes its subtask modules")


@dataclass(frozen=True)
class Division:
    task: MatchingTask
    subtasks: tuple[MatchingSubtask, ...]
    strategy: str
    n: int
    seed: int
    config: NormalizationConfig
    hyperparams: Optional[HyperParams] = None
    timings_ms: Mapping[str, float] = field(default_factory=dict)
    model: Optional[EmbeddingModel] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.subtasks) != self.n or self.n < 1:
            raise ValueError("a division must hold exactly n >= 1 subtasks")


def context_of(m: Alignment, source: Ontology, target: Ontology) -> tuple[Module, Module]:
    """The pair of locality modules seeded by the alignment's endpoints."""
    left = extract_module(source, {mp.source_id for mp in m})
    right = extract_module(target, {mp.target_id for mp in m})
    return left, right


def divide_task(
    task: MatchingTask,
    n: int,
    strategy: str = "naive",
    config: Optional[NormalizationConfig] = None,
    seed: int = 0,
    hyperparams: Optional[HyperParams] = None,
    model: Optional[EmbeddingModel] = None,
    index: Optional[LexicalIndex] = None,
    threads: int = 1,
) -> Division:
    """Divide a matching task into ``n`` subtasks.

    Pipeline: build the lexical index, cluster its entries, derive each
    cluster's candidate mappings, and extract the pair of locality modules
    those mappings seed. A prebuilt index or trained model may be supplied to
    skip the corresponding phase; all remaining randomness derives from
    ``seed``. Subtasks come back in cluster-id order regardless of the
    thread count.
    """
    if n < 1:
        raise DivisionError("number of subtasks must be at least 1")
    if strategy not in STRATEGIES:
        raise DivisionError(f"unknown strategy {strategy!r}")
    config = config or NormalizationConfig()
    timings: dict[str, float] = {}

    start = time.perf_counter()
    if index is None:
        index = build_index(task.source, task.target, config)
    timings["lexindex"] = (time.perf_counter() - start) * 1000.0

    if len(index.entries) == 0:
        raise DivisionError(
            "no lexical overlap between the ontologies; consider enriching "
            "their labels"
        )
    if n > len(index.entries):
        raise DivisionError(
            f"cannot build {n} subtasks from {len(index.entries)} index entries"
        )

    train_seed, cluster_seed = (
        int(s) for s in np.random.SeedSequence(seed).generate_state(2)
    )
    if strategy == "embedding" and model is None:
        hp = replace(hyperparams or HyperParams(), seed=train_seed)
        start = time.perf_counter()
        model = train_embeddings(index, hp)
        timings["training"] = (time.perf_counter() - start) * 1000.0
        hyperparams = hp

    start = time.perf_counter()
    groups = cluster_entries(index, n, strategy, model=model, seed=cluster_seed)
    timings["clustering"] = (time.perf_counter() - start) * 1000.0

    start = time.perf_counter()

    def build_subtask(cluster_id: int) -> MatchingSubtask:
        entries = groups[cluster_id]
        mappings, skipped = derive_mappings(entries, config.max_mappings_per_entry)
        left, right = context_of(mappings, task.source, task.target)
        return MatchingSubtask(cluster_id, left, right, mappings, skipped)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            subtasks = tuple(pool.map(build_subtask, range(n)))
    else:
        subtasks = tuple(build_subtask(i) for i in range(n))
    timings["module_extraction"] = (time.perf_counter() - start) * 1000.0

    return Division(
        task=task,
        subtasks=subtasks,
        strategy=strategy,
        n=n,
        seed=seed,
        config=config,
        hyperparams=hyperparams if strategy == "embedding" else None,
        timings_ms=timings,
        model=model if strategy == "embedding" else None,
    )


def module_to_ontology(module: Module, parent: Ontology) -> Ontology:
    """Materialize a module as a standalone ontology.

    Every signature entity is declared (locality never pulls declarations in
    by itself) and labels are restricted to the module signature so the
    result is a self-contained input for a matcher.
    """
    entities = tuple(
        parent.entity(entity_id) for entity_id in sorted(module.signature)
    )
    labels = {
        ent.id: parent.labels_of(ent.id)
        for ent in entities
        if parent.labels_of(ent.id)
    }
    return Ontology(parent.iri, entities, module.axioms, labels)
