"""Inverted lexical index over the labels of two ontologies.

Every label is normalized into a set of word stems; subsets of those words
become index keys pointing at the entities whose labels produced them. Keys
seen on both sides of the task are kept, and each surviving entry suggests
the Cartesian product of its two id sets as candidate mappings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .metrics import Alignment, Mapping
from .model import EntityKind, Ontology
from .porter import stem

# Fixed 30-word English stop list shipped with the package. Tokens shorter
# than two characters are dropped independently of this list.
STOP_WORDS = frozenset(
    """
    a an and are as at be but by for from has in into is it no not of on
    or such that the their then there to was with
    """.split()
)

Key = tuple[str, ...]

_TOKEN_SPLIT = re.compile(r"[\W_]+", re.UNICODE)


@dataclass(frozen=True)
class NormalizationConfig:
    """Controls label normalization and key generation.

    ``delta`` bounds the subset keys per label: only subsets of at least
    max(1, |words| - delta) words are generated, largest first, capped at
    ``max_subsets_per_label``.
    """

    stop_words: frozenset[str] = STOP_WORDS
    stemming: bool = True
    delta: int = 1
    max_subsets_per_label: int = 32
    max_mappings_per_entry: Optional[int] = None
    classes_only: bool = True

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.max_subsets_per_label < 1:
            raise ValueError("max_subsets_per_label must be at least 1")
        if self.max_mappings_per_entry is not None and self.max_mappings_per_entry < 1:
            raise ValueError("max_mappings_per_entry must be at least 1 or None")


@dataclass(frozen=True)
class IndexEntry:
    key: Key
    source_ids: frozenset[int]
    target_ids: frozenset[int]


@dataclass(frozen=True, eq=False)
class LexicalIndex:
    entries: tuple[IndexEntry, ...]
    config: NormalizationConfig

    def __len__(self) -> int:
        return len(self.entries)


def normalize_label(text: str, config: NormalizationConfig) -> frozenset[str]:
    """Split a label into normalized word stems.

    Splits on any non-alphanumeric character (underscore included), lowercases,
    drops stop words and single-character tokens, then stems if enabled.
    """
    words = set()
    for token in _TOKEN_SPLIT.split(text):
        token = token.lower()
        if len(token) < 2 or token in config.stop_words:
            continue
        words.add(stem(token) if config.stemming else token)
    return frozenset(words)


def subset_keys(words: frozenset[str], config: NormalizationConfig) -> set[Key]:
    """All subset keys of a normalized word set.

    Subsets of size >= max(1, |words| - delta) are produced largest-first and
    in lexicographic order within a size, stopping at the configured cap; the
    full word set always survives the cap.
    """
    if not words:
        raise ValueError("cannot build keys from an empty word set")
    ordered = sorted(words)
    min_size = max(1, len(ordered) - config.delta)
    keys: set[Key] = set()
    for size in range(len(ordered), min_size - 1, -1):
        for combo in combinations(ordered, size):
            if len(keys) >= config.max_subsets_per_label:
                return keys
            keys.add(combo)
    return keys


def build_index(source: Ontology, target: Ontology, config: NormalizationConfig) -> LexicalIndex:
    """Build the index for a task; entries seen on only one side are dropped."""
    source_hits = _index_side(source, config)
    target_hits = _index_side(target, config)
    entries = [
        IndexEntry(key, frozenset(source_hits[key]), frozenset(target_hits[key]))
        for key in source_hits.keys() & target_hits.keys()
    ]
    entries.sort(key=lambda e: e.key)
    return LexicalIndex(tuple(entries), config)


def _index_side(ontology: Ontology, config: NormalizationConfig) -> dict[Key, set[int]]:
    hits: dict[Key, set[int]] = {}
    for entity in ontology.entities:
        if config.classes_only and entity.kind is not EntityKind.CLASS:
            continue
        for label in ontology.labels_of(entity.id):
            words = normalize_label(label.text, config)
            if not words:
                continue
            for key in subset_keys(words, config):
                hits.setdefault(key, set()).add(entity.id)
    return hits


def derive_mappings(
    entries: Iterable[IndexEntry], max_mappings_per_entry: Optional[int] = None
) -> tuple[Alignment, tuple[Key, ...]]:
    """Candidate mappings from index entries: the union over entries of
    source ids x target ids, deduplicated, relation ``=`` and confidence 1.0.

    Entries whose product exceeds the cap are skipped and returned so callers
    can report them.
    """
    mappings: list[Mapping] = []
    skipped: list[Key] = []
    for entry in entries:
        if (
            max_mappings_per_entry is not None
            and len(entry.source_ids) * len(entry.target_ids) > max_mappings_per_entry
        ):
            skipped.append(entry.key)
            continue
        for source_id in sorted(entry.source_ids):
            for target_id in sorted(entry.target_ids):
                mappings.append(Mapping(source_id, target_id))
    return Alignment(mappings), tuple(skipped)


def dump_index(index: LexicalIndex, source: Ontology, target: Ontology) -> str:
    """Deterministic TSV rendering: key words space-joined, then the source
    and target IRIs comma-joined in id order."""
    lines = []
    for entry in index.entries:
        source_iris = ",".join(source.entity(i).iri for i in sorted(entry.source_ids))
        target_iris = ",".join(target.entity(i).iri for i in sorted(entry.target_ids))
        lines.append(f"{' '.join(entry.key)}\t{source_iris}\t{target_iris}")
    return "\n".join(lines) + ("\n" if lines else "")
