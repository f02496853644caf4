"""Syntactic bottom-locality checking and locality-module extraction.

An axiom is bottom-local w.r.t. a signature when interpreting every entity
outside the signature as the empty set makes the axiom trivially true. The
module of a seed signature is the least fixpoint obtained by repeatedly
pulling in non-local axioms and widening the signature with theirs; it
collects the entities semantically related to the seed.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from weakref import WeakKeyDictionary

from .model import (
    Axiom,
    ClassExpression,
    Declaration,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    _Bottom,
    _Top,
    signature_of,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Module:
    """A locality module: a subset of an ontology's axioms, its widened
    signature, and the seed it grew from.

    The signature is sig(axioms) united with the seed entities present in the
    ontology, so every seeded entity survives into the extracted fragment.
    """

    axioms: tuple[Axiom, ...]
    signature: frozenset[int]
    seed: frozenset[int]


def _is_bottom_expr(expr: ClassExpression, sig) -> bool:
    """Membership in the syntactically-bottom grammar w.r.t. ``sig``."""
    if isinstance(expr, _Bottom):
        return True
    if isinstance(expr, Named):
        return expr.entity_id not in sig
    if isinstance(expr, IntersectionOf):
        return any(_is_bottom_expr(o, sig) for o in expr.operands)
    if isinstance(expr, SomeValuesFrom):
        return expr.role_id not in sig or _is_bottom_expr(expr.filler, sig)
    return False  # Top


def _is_top_expr(expr: ClassExpression, sig) -> bool:
    if isinstance(expr, _Top):
        return True
    if isinstance(expr, IntersectionOf):
        return all(_is_top_expr(o, sig) for o in expr.operands)
    return False


def is_bottom_local(axiom: Axiom, sig) -> bool:
    """True when the axiom says nothing about the given signature.

    ``sig`` may be any container of entity ids supporting membership tests;
    it is never copied.
    """
    if isinstance(sig, (list, tuple)):
        sig = frozenset(sig)
    if isinstance(axiom, SubClassOf):
        return _is_bottom_expr(axiom.sub, sig) or _is_top_expr(axiom.sup, sig)
    if isinstance(axiom, EquivalentClasses):
        return all(_is_bottom_expr(o, sig) for o in axiom.operands) or all(
            _is_top_expr(o, sig) for o in axiom.operands
        )
    if isinstance(axiom, SubObjectPropertyOf):
        return axiom.sub_id not in sig
    if isinstance(axiom, Declaration):
        return True
    raise TypeError(f"unknown axiom {type(axiom).__name__}")


# per-ontology axiom signatures and entity occurrence lists; ontologies are
# immutable, so many extractions over the same ontology share one index
_AXIOM_INDEX: "WeakKeyDictionary[Ontology, tuple]" = WeakKeyDictionary()


def _axiom_index(ontology: Ontology):
    cached = _AXIOM_INDEX.get(ontology)
    if cached is None:
        sigs = [signature_of(ax) for ax in ontology.axioms]
        occurrences: dict[int, list[int]] = {}
        for idx, sig in enumerate(sigs):
            for entity_id in sig:
                occurrences.setdefault(entity_id, []).append(idx)
        cached = (sigs, occurrences)
        _AXIOM_INDEX[ontology] = cached
    return cached


def extract_module(ontology: Ontology, seed) -> Module:
    """Extract the bottom-locality module for a seed signature.

    Worklist fixpoint: an axiom is re-examined only when the growing
    signature gains one of its entities, which keeps extraction near-linear
    in the ontology size. Seed ids absent from the ontology are ignored.
    """
    seed = frozenset(seed)
    inside = seed & ontology.signature
    outside = seed - inside
    if outside:
        log.warning("ignoring %d seed ids outside the ontology signature", len(outside))

    axioms = ontology.axioms
    axiom_sigs, occurrences = _axiom_index(ontology)

    sigma = set(inside)
    in_module = bytearray(len(axioms))
    queued = bytearray(len(axioms))
    pending = deque(range(len(axioms)))
    for idx in pending:
        queued[idx] = 1
    module_indexes: list[int] = []

    while pending:
        idx = pending.popleft()
        queued[idx] = 0
        if in_module[idx]:
            continue
        if is_bottom_local(axioms[idx], sigma):
            continue
        in_module[idx] = 1
        module_indexes.append(idx)
        gained = axiom_sigs[idx] - sigma
        sigma.update(gained)
        for entity_id in gained:
            for other in occurrences.get(entity_id, ()):
                if not in_module[other] and not queued[other]:
                    queued[other] = 1
                    pending.append(other)

    module_indexes.sort()
    module_axioms = tuple(axioms[i] for i in module_indexes)
    return Module(module_axioms, frozenset(sigma), seed)
