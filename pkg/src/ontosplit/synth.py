"""Synthetic ontology pairs for experiments and property-based tests.

Each side is a rooted class hierarchy. A prefix of the classes (the overlap
region) draws its label words from vocabulary pools shared by both sides;
the remaining classes use side-private words only. Existential and
equivalence axioms stay inside the overlap prefix so the lexically isolated
suffix is never pulled into a locality module, which makes planted coverage
and size-ratio expectations exact.
"""

from __future__ import annotations

import numpy as np

from .division import MatchingTask, make_task
from .metrics import Alignment, Mapping
from .model import (
    Entity,
    EntityKind,
    EquivalentClasses,
    Label,
    LabelKind,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
)


def _family_pools(families: int, words_per_family: int) -> list[list[str]]:
    return [
        [f"w{family}x{i}" for i in range(words_per_family)]
        for family in range(families)
    ]


def _build_side(
    rng,
    iri_base: str,
    side_tag: str,
    n_classes: int,
    n_overlap: int,
    pools: list[list[str]],
    extra_words: dict[int, str],
    words_per_label: tuple[int, int],
    existential_fraction: float,
    equivalence_fraction: float,
    synonym_fraction: float,
) -> Ontology:
    role = Entity(0, f"{iri_base}#partOf", EntityKind.OBJECT_PROPERTY)
    entities = [role]
    labels: dict[int, tuple[Label, ...]] = {0: (Label(0, "part of"),)}
    axioms = []
    lo, hi = words_per_label

    def class_id(index: int) -> int:
        return index + 1  # the role occupies id 0

    for index in range(n_classes):
        entity_id = class_id(index)
        entities.append(Entity(entity_id, f"{iri_base}#C{index}", EntityKind.CLASS))
        if index < n_overlap:
            pool = pools[index % len(pools)]
            count = int(rng.integers(lo, hi + 1))
            picks = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
            words = [pool[int(p)] for p in picks]
        else:
            count = int(rng.integers(lo, hi + 1))
            words = [f"{side_tag}{int(w)}" for w in rng.integers(0, 10 * n_classes, size=count)]
        if index in extra_words:
            words = [extra_words[index]]  # exact shared label, any delta matches
        entity_labels = [Label(entity_id, " ".join(words))]
        if rng.random() < synonym_fraction and index < n_overlap:
            pool = pools[index % len(pools)]
            synonym = pool[int(rng.integers(0, len(pool)))]
            entity_labels.append(Label(entity_id, synonym, LabelKind.SYNONYM))
        labels[entity_id] = tuple(entity_labels)

        if index > 0:
            parent = class_id(int(rng.integers(0, index)))
            axioms.append(SubClassOf(Named(entity_id), Named(parent)))
        if index < n_overlap and index > 0:
            if rng.random() < existential_fraction:
                filler = class_id(int(rng.integers(0, index)))
                axioms.append(
                    SubClassOf(Named(entity_id), SomeValuesFrom(0, Named(filler)))
                )
            if rng.random() < equivalence_fraction:
                other = class_id(int(rng.integers(0, index)))
                axioms.append(
                    EquivalentClasses(
                        (Named(entity_id), SomeValuesFrom(0, Named(other)))
                    )
                )
    return Ontology(f"{iri_base}", tuple(entities), tuple(axioms), labels)


def synthetic_pair(
    seed: int,
    n_source: int,
    n_target: int,
    overlap_fraction: float = 0.5,
    families: int = 4,
    words_per_family: int = 12,
    words_per_label: tuple[int, int] = (1, 3),
    existential_fraction: float = 0.1,
    equivalence_fraction: float = 0.05,
    synonym_fraction: float = 0.2,
) -> MatchingTask:
    """A matching task whose sides share vocabulary on an overlap prefix.

    Class 0 of both sides carries an identical anchor label, so the lexical
    index of the pair is never empty.
    """
    rng = np.random.default_rng(seed)
    pools = _family_pools(families, words_per_family)
    anchor = {0: pools[0][0]}
    n_overlap_source = max(1, int(n_source * overlap_fraction))
    n_overlap_target = max(1, int(n_target * overlap_fraction))
    source = _build_side(
        rng, "http://example.org/source", "s", n_source, n_overlap_source,
        pools, anchor, words_per_label, existential_fraction,
        equivalence_fraction, synonym_fraction,
    )
    target = _build_side(
        rng, "http://example.org/target", "t", n_target, n_overlap_target,
        pools, anchor, words_per_label, existential_fraction,
        equivalence_fraction, synonym_fraction,
    )
    return make_task(source, target)


def planted_pair(
    seed: int,
    n_source: int,
    n_target: int,
    reference_size: int,
    lexical_fraction: float,
    overlap_fraction: float = 0.5,
    families: int = 4,
) -> tuple[MatchingTask, Alignment]:
    """A matching task plus a planted reference alignment.

    A ``lexical_fraction`` share of the reference pairs share a dedicated
    word between their two labels (and sit inside the overlap prefix); the
    rest pair up lexically disjoint suffix classes.
    """
    n_overlap_source = max(1, int(n_source * overlap_fraction))
    n_overlap_target = max(1, int(n_target * overlap_fraction))
    n_lexical = round(reference_size * lexical_fraction)
    n_blind = reference_size - n_lexical
    if n_lexical > min(n_overlap_source, n_overlap_target):
        raise ValueError("not enough overlap classes for the requested reference")
    if n_blind > min(n_source - n_overlap_source, n_target - n_overlap_target):
        raise ValueError("not enough suffix classes for the blind reference pairs")

    rng = np.random.default_rng(seed)
    pools = _family_pools(families, 12)
    shared = {i: f"ref{i}x" for i in range(n_lexical)}
    shared[0] = shared.get(0, pools[0][0])
    source = _build_side(
        rng, "http://example.org/source", "s", n_source, n_overlap_source,
        pools, shared, (1, 3), 0.1, 0.05, 0.2,
    )
    target = _build_side(
        rng, "http://example.org/target", "t", n_target, n_overlap_target,
        pools, shared, (1, 3), 0.1, 0.05, 0.2,
    )
    task = make_task(source, target)

    mappings = []
    for i in range(n_lexical):
        source_id = task.source.entity_by_iri(f"http://example.org/source#C{i}").id
        target_id = task.target.entity_by_iri(f"http://example.org/target#C{i}").id
        mappings.append(Mapping(source_id, target_id))
    for j in range(n_blind):
        source_id = task.source.entity_by_iri(
            f"http://example.org/source#C{n_overlap_source + j}"
        ).id
        target_id = task.target.entity_by_iri(
            f"http://example.org/target#C{n_overlap_target + j}"
        ).id
        mappings.append(Mapping(source_id, target_id))
    return task, Alignment(mappings)


def family_pair(
    seed: int,
    families: int,
    classes_per_family: int,
    words_per_family: int = 8,
) -> MatchingTask:
    """A pair whose overlap splits into disjoint vocabulary families.

    Labels only ever combine words of one family, so index entries cluster
    naturally by family; useful for separability experiments.
    """
    rng = np.random.default_rng(seed)
    n = families * classes_per_family
    pools = _family_pools(families, words_per_family)
    source = _build_side(
        rng, "http://example.org/source", "s", n, n, pools, {}, (1, 2), 0.1, 0.0, 0.0,
    )
    target = _build_side(
        rng, "http://example.org/target", "t", n, n, pools, {}, (1, 2), 0.1, 0.0, 0.0,
    )
    return make_task(source, target)
