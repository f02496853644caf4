"""Tab-separated alignment files.

Each row holds 2 to 4 fields: source IRI, target IRI, relation (=, < or >,
defaulting to =) and a confidence in (0, 1] defaulting to 1.0. Rows whose
IRIs cannot be resolved against the task ontologies are collected and
reported rather than silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import RELATIONS, Alignment, Mapping
from .model import Ontology


class AlignmentFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class UnresolvedRow:
    line: int
    source_iri: str
    target_iri: str
    reason: str


@dataclass(frozen=True)
class AlignmentParseResult:
    alignment: Alignment
    unresolved: tuple[UnresolvedRow, ...]


def parse_alignment(document: str, source: Ontology, target: Ontology) -> AlignmentParseResult:
    """Resolve alignment rows to entity id pairs against the two ontologies."""
    mappings = []
    unresolved = []
    for line_no, raw in enumerate(document.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t")
        if not 2 <= len(fields) <= 4:
            raise AlignmentFormatError(
                f"expected 2-4 tab-separated fields, found {len(fields)}", line_no
            )
        source_iri = fields[0].strip()
        target_iri = fields[1].strip()
        relation = fields[2].strip() if len(fields) >= 3 else "="
        if relation not in RELATIONS:
            raise AlignmentFormatError(f"unknown relation symbol {relation!r}", line_no)
        confidence = 1.0
        if len(fields) == 4:
            try:
                confidence = float(fields[3])
            except ValueError:
                raise AlignmentFormatError(
                    f"malformed confidence {fields[3]!r}", line_no
                ) from None
            if not (0.0 < confidence <= 1.0):
                raise AlignmentFormatError(
                    f"confidence {confidence} outside (0, 1]", line_no
                )
        if not source.has_iri(source_iri):
            unresolved.append(
                UnresolvedRow(line_no, source_iri, target_iri, "source IRI not in source ontology")
            )
            continue
        if not target.has_iri(target_iri):
            unresolved.append(
                UnresolvedRow(line_no, source_iri, target_iri, "target IRI not in target ontology")
            )
            continue
        mappings.append(
            Mapping(
                source.entity_by_iri(source_iri).id,
                target.entity_by_iri(target_iri).id,
                relation,
                confidence,
            )
        )
    return AlignmentParseResult(Alignment(mappings), tuple(unresolved))


def serialize_alignment(alignment: Alignment, source: Ontology, target: Ontology) -> str:
    """Deterministic TSV: rows sorted by id pair, full IRIs, repr confidences."""
    lines = []
    for m in alignment.sorted_mappings():
        lines.append(
            f"{source.entity(m.source_id).iri}\t{target.entity(m.target_id).iri}"
            f"\t{m.relation}\t{m.confidence!r}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
