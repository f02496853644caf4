"""Alignments and the evaluation measures over them.

A mapping is identified by its (source id, target id) pair alone; relation
and confidence are carried along but never take part in set operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

RELATIONS = ("=", "<", ">")


@dataclass(frozen=True)
class Mapping:
    source_id: int
    target_id: int
    relation: str = field(default="=", compare=False)
    confidence: float = field(default=1.0, compare=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation symbol {self.relation!r}")
        if not (0.0 < self.confidence <= 1.0):
            raise ValueError(f"confidence must lie in (0, 1], got {self.confidence}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.source_id, self.target_id)


class Alignment:
    """A set of mappings, deduplicated by id pair.

    When the same pair arrives twice the higher confidence wins; conflicting
    relations collapse to ``=``. Equality compares pair sets only.
    """

    __slots__ = ("_by_pair",)

    def __init__(self, mappings: Iterable[Mapping] = ()):
        self._by_pair: dict[tuple[int, int], Mapping] = {}
        for m in mappings:
            self._add(m)

    def _add(self, m: Mapping) -> bool:
        """Insert one mapping; returns True if the relations conflicted."""
        old = self._by_pair.get(m.pair)
        if old is None:
            self._by_pair[m.pair] = m
            return False
        conflict = old.relation != m.relation
        relation = old.relation if not conflict else "="
        confidence = max(old.confidence, m.confidence)
        self._by_pair[m.pair] = Mapping(m.source_id, m.target_id, relation, confidence)
        return conflict

    def __len__(self) -> int:
        return len(self._by_pair)

    def __iter__(self) -> Iterator[Mapping]:
        return iter(self._by_pair.values())

    def __contains__(self, item) -> bool:
        if isinstance(item, Mapping):
            return item.pair in self._by_pair
        return tuple(item) in self._by_pair

    def __eq__(self, other) -> bool:
        if not isinstance(other, Alignment):
            return NotImplemented
        return self._by_pair.keys() == other._by_pair.keys()

    def __hash__(self):
        return hash(frozenset(self._by_pair))

    def __repr__(self):
        return f"Alignment({len(self)} mappings)"

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._by_pair)

    def sorted_mappings(self) -> list[Mapping]:
        return [self._by_pair[pair] for pair in sorted(self._by_pair)]


def merge_alignments(parts: Iterable[Alignment]) -> tuple[Alignment, list[tuple[int, int]]]:
    """Set union of per-subtask alignments.

    Duplicate pairs keep the maximum confidence; pairs whose relations
    disagree are normalized to ``=`` and returned as conflicts.
    """
    merged = Alignment()
    conflicts: list[tuple[int, int]] = []
    for part in parts:
        for m in part:
            if merged._add(m):
                conflicts.append(m.pair)
    return merged, conflicts


def precision_recall_f(system: Alignment, reference: Alignment) -> tuple[float, float, float]:
    """Precision, recall and f-measure of a system alignment against a
    reference.

    An empty system alignment scores precision 1.0 by convention; an empty
    reference is rejected.
    """
    if len(reference) == 0:
        raise ValueError("reference alignment must be non-empty")
    if len(system) == 0:
        return (1.0, 0.0, 0.0)
    hits = len(system.pairs() & reference.pairs())
    precision = hits / len(system)
    recall = hits / len(reference)
    if precision + recall == 0.0:
        return (0.0, 0.0, 0.0)
    f_measure = 2.0 * precision * recall / (precision + recall)
    return (precision, recall, f_measure)


def task_size_ratio(subtask, task) -> float:
    """Search-space size of one subtask relative to the whole task:
    (|Sig(source module)| * |Sig(target module)|) / (|Sig(O1)| * |Sig(O2)|).
    """
    denom = len(task.source.signature) * len(task.target.signature)
    if denom == 0:
        raise ValueError("full task has an empty signature")
    num = len(subtask.source_module.signature) * len(subtask.target_module.signature)
    return num / denom


def division_size_ratio(division) -> float:
    """Sum of per-subtask size ratios; may exceed 1.0 when subtasks overlap."""
    return sum(task_size_ratio(sub, division.task) for sub in division.subtasks)


def coverage(subject, m: Alignment) -> Alignment:
    """The subset of ``m`` whose endpoints both fall inside the subject's
    signatures.

    The subject may be a whole task, a single subtask, or a division (where a
    mapping counts as covered if any subtask covers it).
    """
    source_sig, target_sig = _subject_signatures(subject)
    if isinstance(source_sig, list):  # division: list of per-subtask pairs
        covered = [
            mp
            for mp in m
            if any(mp.source_id in s and mp.target_id in t for s, t in zip(source_sig, target_sig))
        ]
    else:
        covered = [mp for mp in m if mp.source_id in source_sig and mp.target_id in target_sig]
    return Alignment(covered)


def _subject_signatures(subject):
    if hasattr(subject, "subtasks"):  # Division
        sources = [sub.source_module.signature for sub in subject.subtasks]
        targets = [sub.target_module.signature for sub in subject.subtasks]
        return sources, targets
    if hasattr(subject, "source_module"):  # MatchingSubtask
        return subject.source_module.signature, subject.target_module.signature
    if hasattr(subject, "source"):  # MatchingTask
        return subject.source.signature, subject.target.signature
    raise TypeError(f"cannot compute coverage over {type(subject).__name__}")


def coverage_ratio(subject, m: Alignment) -> float:
    """|covered mappings| / |m|; rejects an empty alignment."""
    if len(m) == 0:
        raise ValueError("cannot compute a coverage ratio over an empty alignment")
    return len(coverage(subject, m)) / len(m)
