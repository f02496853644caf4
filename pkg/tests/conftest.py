import pytest

from ontosplit.model import Entity, EntityKind, Label, Ontology


def anatomy_pair() -> tuple[Ontology, Ontology]:
    """Small hand-built pair of anatomy/clinical ontologies.

    Two labels share the word "acinus", one label pair shares
    "mesothelial"/"cell", and each side has one lexically isolated entity.
    """
    def cls(entity_id: int, iri: str) -> Entity:
        return Entity(entity_id, iri, EntityKind.CLASS)

    source_entities = (
        cls(7661, "http://example.org/anatomy#Serous_acinus"),
        cls(8171, "http://example.org/anatomy#Hepatic_acinus"),
        cls(19987, "http://example.org/anatomy#Mesothelial_cell_of_pleura"),
        cls(55518, "http://example.org/anatomy#Lunate_facet_of_hamate"),
    )
    source_labels = {
        7661: (Label(7661, "Serous acinus"),),
        8171: (Label(8171, "Hepatic acinus"),),
        19987: (Label(19987, "Mesothelial cell of pleura"),),
        55518: (Label(55518, "Lunate facet of hamate"),),
    }
    target_entities = (
        cls(118081, "http://example.org/clinical#Liver_acinus"),
        cls(117237, "http://example.org/clinical#Pleural_Mesothelial_Cell"),
        cls(113578, "http://example.org/clinical#Breast_Feeding"),
        cls(111023, "http://example.org/clinical#Inability_To_Breast_Feed"),
    )
    target_labels = {
        118081: (Label(118081, "Liver acinus"),),
        117237: (Label(117237, "Pleural Mesothelial Cell"),),
        113578: (Label(113578, "Breast Feeding"),),
        111023: (Label(111023, "Inability To Breast Feed"),),
    }
    source = Ontology("http://example.org/anatomy", source_entities, (), source_labels)
    target = Ontology("http://example.org/clinical", target_entities, (), target_labels)
    return source, target


@pytest.fixture
def anatomy():
    return anatomy_pair()
