"""Randomized ontologies and hand-built index fixtures for property tests."""

import numpy as np

from ontosplit.lexindex import IndexEntry, LexicalIndex, NormalizationConfig
from ontosplit.model import (
    BOTTOM,
    Declaration,
    Entity,
    EntityKind,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    TOP,
)


def random_expression(rng, class_ids, role_ids, depth=2):
    roll = rng.random()
    if depth == 0 or roll < 0.55:
        return Named(int(rng.choice(class_ids)))
    if roll < 0.62:
        return TOP
    if roll < 0.67:
        return BOTTOM
    if roll < 0.85 and role_ids:
        return SomeValuesFrom(
            int(rng.choice(role_ids)),
            random_expression(rng, class_ids, role_ids, depth - 1),
        )
    return IntersectionOf(
        (
            random_expression(rng, class_ids, role_ids, depth - 1),
            random_expression(rng, class_ids, role_ids, depth - 1),
        )
    )


def random_ontology(seed, max_classes=12, max_roles=3, max_axioms=50) -> Ontology:
    rng = np.random.default_rng(seed)
    n_classes = int(rng.integers(1, max_classes + 1))
    n_roles = int(rng.integers(0, max_roles + 1))
    entities = [
        Entity(i, f"http://example.org/rand#C{i}", EntityKind.CLASS)
        for i in range(n_classes)
    ]
    entities += [
        Entity(n_classes + j, f"http://example.org/rand#r{j}", EntityKind.OBJECT_PROPERTY)
        for j in range(n_roles)
    ]
    class_ids = list(range(n_classes))
    role_ids = list(range(n_classes, n_classes + n_roles))

    axioms = []
    for _ in range(int(rng.integers(0, max_axioms + 1))):
        roll = rng.random()
        if roll < 0.70:
            axioms.append(
                SubClassOf(
                    random_expression(rng, class_ids, role_ids),
                    random_expression(rng, class_ids, role_ids),
                )
            )
        elif roll < 0.85:
            count = int(rng.integers(2, 4))
            axioms.append(
                EquivalentClasses(
                    tuple(
                        random_expression(rng, class_ids, role_ids)
                        for _ in range(count)
                    )
                )
            )
        elif roll < 0.95 and role_ids:
            axioms.append(
                SubObjectPropertyOf(int(rng.choice(role_ids)), int(rng.choice(role_ids)))
            )
        else:
            axioms.append(Declaration(int(rng.choice(class_ids))))
    return Ontology("http://example.org/rand", tuple(entities), tuple(axioms))


def random_seed_signature(seed, ontology, max_size=5) -> frozenset:
    rng = np.random.default_rng(seed)
    ids = sorted(ontology.signature)
    size = int(rng.integers(0, min(max_size, len(ids)) + 1))
    if size == 0:
        return frozenset()
    return frozenset(int(i) for i in rng.choice(ids, size=size, replace=False))


# -- hand-built index fixtures ------------------------------------------------

FAMILY_WORDS = (
    ("aorta", "artery", "atrium", "heart", "valve"),
    ("biopsy", "cyst", "lesion", "sarcoma", "tumor"),
)


def family_of_entry(entry) -> int:
    for family, words in enumerate(FAMILY_WORDS):
        if entry.key[0] in words:
            return family
    raise AssertionError(f"unknown fixture word {entry.key[0]!r}")


def family_entity_ids(family: int) -> frozenset:
    return frozenset(
        {family * 10, family * 10 + 1, 1000 + family * 10, 1000 + family * 10 + 1}
    )


def two_family_index() -> LexicalIndex:
    """Ten single-word entries split over two disjoint vocabulary groups.

    Each group has its own two source and two target entity ids; every entry
    of a group points at all four, so keys of one group share their entities
    and groups never overlap.
    """
    entries = []
    for family, words in enumerate(FAMILY_WORDS):
        sources = frozenset({family * 10, family * 10 + 1})
        targets = frozenset({1000 + family * 10, 1000 + family * 10 + 1})
        for word in words:
            entries.append(IndexEntry((word,), sources, targets))
    entries.sort(key=lambda e: e.key)
    return LexicalIndex(tuple(entries), NormalizationConfig())
