"""Line-oriented functional-syntax ontology reader and writer.

Supported constructs, one per line with ``#`` comments:

    Prefix(p:=<IRI>)
    Ontology(<IRI>
    Declaration(Class(IRI)) | Declaration(ObjectProperty(IRI))
    SubClassOf(CE CE)
    EquivalentClasses(CE CE ...)
    SubObjectPropertyOf(r s)
    AnnotationAssertion(prop IRI "literal")
    )

where CE is an IRI, owl:Thing, owl:Nothing, ObjectIntersectionOf(CE CE ...)
or ObjectSomeValuesFrom(r CE). Entities first seen inside an axiom are
auto-declared with the kind their position implies. Annotation assertions on
the configured label/synonym properties become labels; all other annotations
are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    BOTTOM,
    Axiom,
    ClassExpression,
    Declaration,
    Entity,
    EntityKind,
    EquivalentClasses,
    IntersectionOf,
    Label,
    LabelKind,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    TOP,
    _Bottom,
    _Top,
)

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
OBO_EXACT_SYNONYM = "http://www.geneontology.org/formats/oboInOwl#hasExactSynonym"
OBO_RELATED_SYNONYM = "http://www.geneontology.org/formats/oboInOwl#hasRelatedSynonym"
SKOS_ALT_LABEL = "http://www.w3.org/2004/02/skos/core#altLabel"

OWL_THING = "http://www.w3.org/2002/07/owl#Thing"
OWL_NOTHING = "http://www.w3.org/2002/07/owl#Nothing"

BUILTIN_PREFIXES = {
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class ParserConfig:
    """Which annotation properties carry preferred labels and synonyms."""

    label_properties: tuple[str, ...] = (RDFS_LABEL,)
    synonym_properties: tuple[str, ...] = (
        OBO_EXACT_SYNONYM,
        OBO_RELATED_SYNONYM,
        SKOS_ALT_LABEL,
    )

    def __post_init__(self):
        if set(self.label_properties) & set(self.synonym_properties):
            raise ValueError("label and synonym properties must be disjoint")


_PREFIX_LINE = re.compile(r"^Prefix\(\s*([A-Za-z][\w.-]*)?:=<([^<>\s]*)>\s*\)$")
_ONTOLOGY_LINE = re.compile(r"^Ontology\(\s*<([^<>\s]*)>\s*$")

# token kinds: ( ) iri pname string name
_TOKEN = re.compile(
    r"""
    (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<iri><[^<>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<pname>(?:[A-Za-z][\w.-]*)?:[\w.-]*)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<space>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


def _strip_comment(line: str, line_no: int) -> str:
    """Drop a # comment, ignoring # inside <...> or "..."."""
    in_iri = in_string = False
    string_start = 0
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_string = False
        elif in_iri:
            if ch == ">":
                in_iri = False
        elif ch == '"':
            in_string = True
            string_start = i
        elif ch == "<":
            in_iri = True
        elif ch == "#":
            return line[:i]
        i += 1
    if in_string:
        raise ParseError("unterminated string literal", line_no, string_start + 1)
    return line


def _tokenize(line: str, line_no: int) -> list[tuple[str, str, int]]:
    tokens = []
    for match in _TOKEN.finditer(line):
        kind = match.lastgroup
        if kind == "space":
            continue
        if kind == "bad":
            ch = match.group()
            if ch == '"':
                raise ParseError("unterminated string literal", line_no, match.start() + 1)
            raise ParseError(f"unexpected character {ch!r}", line_no, match.start() + 1)
        tokens.append((kind, match.group(), match.start() + 1))
    return tokens


def _unescape(raw: str) -> str:
    return raw[1:-1].replace('\\"', '"').replace("\\\\", "\\")


class _DocumentParser:
    def __init__(self, config: ParserConfig):
        self.config = config
        self.prefixes = dict(BUILTIN_PREFIXES)
        self.declared_in_doc: set[str] = set()
        self.explicit: set[str] = set()
        self.entities: list[Entity] = []
        self.by_iri: dict[str, Entity] = {}
        self.axioms: list[Axiom] = []
        self.labels: dict[int, list[Label]] = {}
        self.ontology_iri: str | None = None
        self.closed = False

    # -- entity registry ----------------------------------------------------

    def _ensure(self, iri: str, kind: EntityKind, line_no: int) -> int:
        existing = self.by_iri.get(iri)
        if existing is not None:
            if existing.kind is not kind:
                raise ParseError(
                    f"{iri} already used as {existing.kind.value}, now as {kind.value}",
                    line_no,
                )
            return existing.id
        entity = Entity(len(self.entities), iri, kind)
        self.entities.append(entity)
        self.by_iri[iri] = entity
        return entity.id

    def _resolve(self, token, line_no: int) -> str:
        kind, value, col = token
        if kind == "iri":
            return value[1:-1]
        if kind == "pname":
            name, _, local = value.partition(":")
            base = self.prefixes.get(name)
            if base is None:
                raise ParseError(f"undeclared prefix {name!r}", line_no, col)
            return base + local
        raise ParseError("expected an IRI", line_no, col)

    # -- line dispatch -------------------------------------------------------

    def feed(self, line: str, line_no: int) -> None:
        stripped = _strip_comment(line, line_no).strip()
        if not stripped:
            return
        if self.closed:
            raise ParseError("content after the closing parenthesis", line_no)
        if stripped == ")":
            if self.ontology_iri is None:
                raise ParseError("closing parenthesis before Ontology(", line_no)
            self.closed = True
            return
        prefix_match = _PREFIX_LINE.match(stripped)
        if prefix_match:
            if self.ontology_iri is not None:
                raise ParseError("Prefix declarations must precede Ontology(", line_no)
            name = prefix_match.group(1) or ""
            if name in self.declared_in_doc:
                raise ParseError(f"duplicate Prefix name {name!r}", line_no)
            self.declared_in_doc.add(name)
            self.prefixes[name] = prefix_match.group(2)
            return
        ontology_match = _ONTOLOGY_LINE.match(stripped)
        if ontology_match:
            if self.ontology_iri is not None:
                raise ParseError("duplicate Ontology( line", line_no)
            self.ontology_iri = ontology_match.group(1)
            return
        if self.ontology_iri is None:
            raise ParseError("expected Prefix(...) or Ontology(<IRI>", line_no)
        self._construct(_tokenize(stripped, line_no), line_no)

    # -- constructs ----------------------------------------------------------

    def _construct(self, tokens, line_no: int) -> None:
        reader = _TokenReader(tokens, line_no)
        keyword = reader.take_name()
        if keyword == "Declaration":
            self._declaration(reader, line_no)
        elif keyword == "SubClassOf":
            reader.expect("lpar")
            sub = self._class_expression(reader, line_no)
            sup = self._class_expression(reader, line_no)
            reader.expect("rpar")
            reader.end()
            self.axioms.append(SubClassOf(sub, sup))
        elif keyword == "EquivalentClasses":
            reader.expect("lpar")
            operands = [self._class_expression(reader, line_no)]
            while not reader.peek_is("rpar"):
                operands.append(self._class_expression(reader, line_no))
            reader.expect("rpar")
            reader.end()
            if len(operands) < 2:
                raise ParseError("EquivalentClasses needs at least two expressions", line_no)
            self.axioms.append(EquivalentClasses(tuple(operands)))
        elif keyword == "SubObjectPropertyOf":
            reader.expect("lpar")
            sub_iri = self._resolve(reader.take_iri(), line_no)
            sup_iri = self._resolve(reader.take_iri(), line_no)
            reader.expect("rpar")
            reader.end()
            sub_id = self._ensure(sub_iri, EntityKind.OBJECT_PROPERTY, line_no)
            sup_id = self._ensure(sup_iri, EntityKind.OBJECT_PROPERTY, line_no)
            self.axioms.append(SubObjectPropertyOf(sub_id, sup_id))
        elif keyword == "AnnotationAssertion":
            self._annotation(reader, line_no)
        else:
            raise ParseError(f"unknown construct {keyword!r}", line_no)

    def _declaration(self, reader: "_TokenReader", line_no: int) -> None:
        reader.expect("lpar")
        entity_keyword = reader.take_name()
        if entity_keyword == "Class":
            kind = EntityKind.CLASS
        elif entity_keyword == "ObjectProperty":
            kind = EntityKind.OBJECT_PROPERTY
        else:
            raise ParseError(f"cannot declare a {entity_keyword!r}", line_no)
        reader.expect("lpar")
        iri = self._resolve(reader.take_iri(), line_no)
        reader.expect("rpar")
        reader.expect("rpar")
        reader.end()
        if iri in self.explicit:
            raise ParseError(f"duplicate declaration of {iri}", line_no)
        self.explicit.add(iri)
        self._ensure(iri, kind, line_no)

    def _annotation(self, reader: "_TokenReader", line_no: int) -> None:
        reader.expect("lpar")
        prop = self._resolve(reader.take_iri(), line_no)
        subject = self._resolve(reader.take_iri(), line_no)
        text = _unescape(reader.take_string())
        reader.expect("rpar")
        reader.end()
        if prop in self.config.label_properties:
            label_kind = LabelKind.PREFERRED
        elif prop in self.config.synonym_properties:
            label_kind = LabelKind.SYNONYM
        else:
            return  # not a lexical annotation; skipped entirely
        if not text.strip():
            return
        existing = self.by_iri.get(subject)
        if existing is not None:
            entity_id = existing.id  # keep the declared kind
        else:
            entity_id = self._ensure(subject, EntityKind.CLASS, line_no)
        self.labels.setdefault(entity_id, []).append(Label(entity_id, text, label_kind))

    def _class_expression(self, reader: "_TokenReader", line_no: int) -> ClassExpression:
        kind, value, col = reader.peek()
        if kind in ("iri", "pname"):
            reader.advance()
            iri = self._resolve((kind, value, col), line_no)
            if iri == OWL_THING:
                return TOP
            if iri == OWL_NOTHING:
                return BOTTOM
            return Named(self._ensure(iri, EntityKind.CLASS, line_no))
        if kind == "string":
            raise ParseError("string literal not allowed in a class expression", line_no, col)
        if kind == "name" and value == "ObjectIntersectionOf":
            reader.advance()
            reader.expect("lpar")
            operands = [self._class_expression(reader, line_no)]
            while not reader.peek_is("rpar"):
                operands.append(self._class_expression(reader, line_no))
            reader.expect("rpar")
            if len(operands) < 2:
                raise ParseError("ObjectIntersectionOf needs at least two expressions", line_no)
            return IntersectionOf(tuple(operands))
        if kind == "name" and value == "ObjectSomeValuesFrom":
            reader.advance()
            reader.expect("lpar")
            role_iri = self._resolve(reader.take_iri(), line_no)
            role_id = self._ensure(role_iri, EntityKind.OBJECT_PROPERTY, line_no)
            filler = self._class_expression(reader, line_no)
            reader.expect("rpar")
            return SomeValuesFrom(role_id, filler)
        raise ParseError(f"expected a class expression, found {value!r}", line_no, col)

    def finish(self, total_lines: int) -> Ontology:
        if self.ontology_iri is None:
            raise ParseError("document contains no Ontology(<IRI>", max(total_lines, 1))
        if not self.closed:
            raise ParseError("unexpected end of document, missing )", total_lines)
        labels = {entity_id: tuple(labs) for entity_id, labs in self.labels.items()}
        return Ontology(self.ontology_iri, tuple(self.entities), tuple(self.axioms), labels)


class _TokenReader:
    def __init__(self, tokens, line_no: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no

    def peek(self):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of line", self.line_no)
        return self.tokens[self.pos]

    def peek_is(self, kind: str) -> bool:
        return self.pos < len(self.tokens) and self.tokens[self.pos][0] == kind

    def advance(self):
        token = self.peek()
        self.pos += 1
        return token

    def expect(self, kind: str):
        token = self.peek()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1]!r}", self.line_no, token[2])
        return self.advance()

    def take_name(self) -> str:
        return self.expect("name")[1]

    def take_iri(self):
        token = self.peek()
        if token[0] not in ("iri", "pname"):
            if token[0] == "string":
                raise ParseError("string literal not allowed here", self.line_no, token[2])
            raise ParseError(f"expected an IRI, found {token[1]!r}", self.line_no, token[2])
        return self.advance()

    def take_string(self) -> str:
        return self.expect("string")[1]

    def end(self) -> None:
        if self.pos != len(self.tokens):
            token = self.tokens[self.pos]
            raise ParseError(f"trailing content {token[1]!r}", self.line_no, token[2])


def parse_ontology(document: str, config: ParserConfig | None = None) -> Ontology:
    """Parse a document; raises ParseError with line/column on bad input."""
    parser = _DocumentParser(config or ParserConfig())
    line_no = 0
    for line_no, line in enumerate(document.splitlines(), start=1):
        parser.feed(line, line_no)
    return parser.finish(line_no)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_DECLARATION_KEYWORD = {
    EntityKind.CLASS: "Class",
    EntityKind.OBJECT_PROPERTY: "ObjectProperty",
}


def serialize_ontology(ontology: Ontology) -> str:
    """Deterministic text form: declarations in id order, axioms in stored
    order, labels grouped by entity id. Parsing the output reproduces the
    ontology up to structural equality.
    """
    lines = [f"Ontology(<{ontology.iri}>"]
    for entity in sorted(ontology.entities, key=lambda e: e.id):
        keyword = _DECLARATION_KEYWORD.get(entity.kind)
        if keyword is None:
            raise ValueError(f"cannot serialize a {entity.kind.value} declaration")
        lines.append(f"Declaration({keyword}(<{entity.iri}>))")
    for axiom in ontology.axioms:
        rendered = _render_axiom(axiom, ontology)
        if rendered is not None:
            lines.append(rendered)
    for entity_id in sorted(ontology.labels):
        subject = ontology.entity(entity_id).iri
        for label in ontology.labels[entity_id]:
            prop = RDFS_LABEL if label.kind is LabelKind.PREFERRED else OBO_EXACT_SYNONYM
            text = label.text.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'AnnotationAssertion(<{prop}> <{subject}> "{text}")')
    lines.append(")")
    return "\n".join(lines) + "\n"


def _render_axiom(axiom: Axiom, ontology: Ontology) -> str | None:
    if isinstance(axiom, SubClassOf):
        return (
            f"SubClassOf({_render_expr(axiom.sub, ontology)} "
            f"{_render_expr(axiom.sup, ontology)})"
        )
    if isinstance(axiom, EquivalentClasses):
        inner = " ".join(_render_expr(o, ontology) for o in axiom.operands)
        return f"EquivalentClasses({inner})"
    if isinstance(axiom, SubObjectPropertyOf):
        return (
            f"SubObjectPropertyOf(<{ontology.entity(axiom.sub_id).iri}> "
            f"<{ontology.entity(axiom.sup_id).iri}>)"
        )
    if isinstance(axiom, Declaration):
        return None  # declarations are emitted from the entity table
    raise TypeError(f"unknown axiom {type(axiom).__name__}")


def _render_expr(expr: ClassExpression, ontology: Ontology) -> str:
    if isinstance(expr, _Top):
        return "owl:Thing"
    if isinstance(expr, _Bottom):
        return "owl:Nothing"
    if isinstance(expr, Named):
        return f"<{ontology.entity(expr.entity_id).iri}>"
    if isinstance(expr, IntersectionOf):
        inner = " ".join(_render_expr(o, ontology) for o in expr.operands)
        return f"ObjectIntersectionOf({inner})"
    if isinstance(expr, SomeValuesFrom):
        role = ontology.entity(expr.role_id).iri
        return f"ObjectSomeValuesFrom(<{role}> {_render_expr(expr.filler, ontology)})"
    raise TypeError(f"unknown expression {type(expr).__name__}")
