"""Immutable ontology data model shared by all pipeline stages.

Entities carry dense numeric ids that are unique across a whole matching
task (source ontology ids first, then target ids), so alignments can be
manipulated as plain integer pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Union


class EntityKind(Enum):
    CLASS = "class"
    OBJECT_PROPERTY = "objectProperty"
    DATA_PROPERTY = "dataProperty"
    INDIVIDUAL = "individual"


class LabelKind(Enum):
    PREFERRED = "preferred"
    SYNONYM = "synonym"


@dataclass(frozen=True)
class Entity:
    id: int
    iri: str
    kind: EntityKind

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"entity id must be non-negative, got {self.id}")


@dataclass(frozen=True)
class Label:
    """A lexical variant attached to an entity (preferred name or synonym)."""

    entity_id: int
    text: str
    kind: LabelKind = LabelKind.PREFERRED

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("label text must be non-empty")


# ---------------------------------------------------------------------------
# Class expressions
# ---------------------------------------------------------------------------

class ClassExpression:
    """Base of the expression grammar: Named | Top | Bottom | IntersectionOf
    | SomeValuesFrom."""

    __slots__ = ()


class _Top(ClassExpression):
    __slots__ = ()

    def __repr__(self):
        return "Top"

    def __eq__(self, other):
        return isinstance(other, _Top)

    def __hash__(self):
        return hash(_Top)


class _Bottom(ClassExpression):
    __slots__ = ()

    def __repr__(self):
        return "Bottom"

    def __eq__(self, other):
        return isinstance(other, _Bottom)

    def __hash__(self):
        return hash(_Bottom)


TOP = _Top()
BOTTOM = _Bottom()


@dataclass(frozen=True)
class Named(ClassExpression):
    entity_id: int


@dataclass(frozen=True)
class IntersectionOf(ClassExpression):
    operands: tuple[ClassExpression, ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("IntersectionOf needs at least two operands")


@dataclass(frozen=True)
class SomeValuesFrom(ClassExpression):
    role_id: int
    filler: ClassExpression


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

class Axiom:
    __slots__ = ()


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    operands: tuple[ClassExpression, ...]

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("EquivalentClasses needs at least two operands")


@dataclass(frozen=True)
class SubObjectPropertyOf(Axiom):
    sub_id: int
    sup_id: int


@dataclass(frozen=True)
class Declaration(Axiom):
    entity_id: int


Signature = frozenset  # set of entity ids


def signature_of(subject: Union[Axiom, ClassExpression, "Ontology"]) -> frozenset[int]:
    """Entity ids syntactically occurring in an expression, axiom or ontology.

    Top and Bottom contribute nothing; a Declaration contributes its entity.
    """
    if isinstance(subject, Ontology):
        return subject.signature
    out: set[int] = set()
    _collect_ids(subject, out)
    return frozenset(out)


def _collect_ids(node, out: set[int]) -> None:
    if isinstance(node, (_Top, _Bottom)):
        return
    if isinstance(node, Named):
        out.add(node.entity_id)
    elif isinstance(node, IntersectionOf):
        for operand in node.operands:
            _collect_ids(operand, out)
    elif isinstance(node, SomeValuesFrom):
        out.add(node.role_id)
        _collect_ids(node.filler, out)
    elif isinstance(node, SubClassOf):
        _collect_ids(node.sub, out)
        _collect_ids(node.sup, out)
    elif isinstance(node, EquivalentClasses):
        for operand in node.operands:
            _collect_ids(operand, out)
    elif isinstance(node, SubObjectPropertyOf):
        out.add(node.sub_id)
        out.add(node.sup_id)
    elif isinstance(node, Declaration):
        out.add(node.entity_id)
    else:
        raise TypeError(f"cannot compute a signature for {type(node).__name__}")


# ---------------------------------------------------------------------------
# Ontology
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ontology:
    """One input ontology: declared entities, axioms in parse order, labels.

    Immutable after construction; safe to share across threads.
    """

    iri: str
    entities: tuple[Entity, ...]
    axioms: tuple[Axiom, ...] = ()
    labels: Mapping[int, tuple[Label, ...]] = field(default_factory=dict)

    def __post_init__(self):
        by_id: dict[int, Entity] = {}
        by_iri: dict[str, Entity] = {}
        for ent in self.entities:
            if ent.id in by_id:
                raise ValueError(f"duplicate entity id {ent.id}")
            if ent.iri in by_iri:
                raise ValueError(f"duplicate entity IRI {ent.iri!r}")
            by_id[ent.id] = ent
            by_iri[ent.iri] = ent
        sig = frozenset(by_id)
        for axiom in self.axioms:
            missing = signature_of(axiom) - sig
            if missing:
                raise ValueError(f"axiom references undeclared ids {sorted(missing)}")
        for entity_id, labels in self.labels.items():
            if entity_id not in by_id:
                raise ValueError(f"label attached to undeclared id {entity_id}")
            for lab in labels:
                if lab.entity_id != entity_id:
                    raise ValueError("label entity_id does not match its key")
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_by_iri", by_iri)
        object.__setattr__(self, "_signature", sig)

    @property
    def signature(self) -> frozenset[int]:
        return self._signature

    def entity(self, entity_id: int) -> Entity:
        return self._by_id[entity_id]

    def entity_by_iri(self, iri: str) -> Entity:
        return self._by_iri[iri]

    def has_iri(self, iri: str) -> bool:
        return iri in self._by_iri

    def labels_of(self, entity_id: int) -> tuple[Label, ...]:
        return self.labels.get(entity_id, ())

    def classes(self) -> Iterator[Entity]:
        for ent in self.entities:
            if ent.kind is EntityKind.CLASS:
                yield ent

    def with_id_offset(self, offset: int) -> "Ontology":
        """Copy of this ontology with every entity id shifted by ``offset``."""
        if offset == 0:
            return self
        entities = tuple(
            Entity(ent.id + offset, ent.iri, ent.kind) for ent in self.entities
        )
        axioms = tuple(_shift_axiom(ax, offset) for ax in self.axioms)
        labels = {
            entity_id + offset: tuple(
                Label(lab.entity_id + offset, lab.text, lab.kind) for lab in labs
            )
            for entity_id, labs in self.labels.items()
        }
        return Ontology(self.iri, entities, axioms, labels)


def _shift_expr(expr: ClassExpression, offset: int) -> ClassExpression:
    if isinstance(expr, (_Top, _Bottom)):
        return expr
    if isinstance(expr, Named):
        return Named(expr.entity_id + offset)
    if isinstance(expr, IntersectionOf):
        return IntersectionOf(tuple(_shift_expr(o, offset) for o in expr.operands))
    if isinstance(expr, SomeValuesFrom):
        return SomeValuesFrom(expr.role_id + offset, _shift_expr(expr.filler, offset))
    raise TypeError(f"unknown expression {type(expr).__name__}")


def _shift_axiom(axiom: Axiom, offset: int) -> Axiom:
    if isinstance(axiom, SubClassOf):
        return SubClassOf(_shift_expr(axiom.sub, offset), _shift_expr(axiom.sup, offset))
    if isinstance(axiom, EquivalentClasses):
        return EquivalentClasses(tuple(_shift_expr(o, offset) for o in axiom.operands))
    if isinstance(axiom, SubObjectPropertyOf):
        return SubObjectPropertyOf(axiom.sub_id + offset, axiom.sup_id + offset)
    if isinstance(axiom, Declaration):
        return Declaration(axiom.entity_id + offset)
    raise TypeError(f"unknown axiom {type(axiom).__name__}")


def assign_ids(
    source_iris: list[str], target_iris: list[str]
) -> tuple[dict[str, int], dict[str, int]]:
    """Dense id assignment over a task: source IRIs get 0..k-1 in declaration
    order, target IRIs continue at k.

    The same IRI appearing in both ontologies receives two distinct ids; a
    duplicate within one ontology is an error.
    """
    source_map: dict[str, int] = {}
    for iri in source_iris:
        if iri in source_map:
            raise ValueError(f"duplicate IRI in source ontology: {iri!r}")
        source_map[iri] = len(source_map)
    target_map: dict[str, int] = {}
    offset = len(source_map)
    for iri in target_iris:
        if iri in target_map:
            raise ValueError(f"duplicate IRI in target ontology: {iri!r}")
        target_map[iri] = offset + len(target_map)
    return source_map, target_map
