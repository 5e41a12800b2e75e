"""Plant vocabulary: batch-control, formalized-process and data-element patterns.

Three standard vocabularies (physical/procedural batch control, formalized
process descriptions, data elements) plus the structural terms of the
machine information model.  `install` writes the class/property
declarations and the cross-vocabulary subclass axioms into a store;
`materialize_alignment` closes instance data over those axioms so the
query layer never has to reason.

Namespace IRIs are fixed defaults; every one of them can be overridden by
passing a replacement mapping to `Terms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .rdf import Iri, PrefixMap, Triple, TripleStore

DEFAULT_NAMESPACES: dict[str, str] = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "ISA88": "http://example.org/ontology/isa88#",
    "VDI3682": "http://example.org/ontology/vdi3682#",
    "DINEN61360": "http://example.org/ontology/dinen61360#",
    "OpcUa": "http://example.org/ontology/opcua#",
    "OpcSS": "http://example.org/plant#",
    "node": "http://example.org/machines/node/",
}

# Variable type names whose value changes get logged.  The stored
# typeDefinition is compared as a plain string, so these are literals.
QUALIFYING_TYPE_DEFINITIONS = (
    "BaseDataVariableType",
    "FiniteStateVariableType",
    "AnalogUnitRangeType",
)

ISA88_PHYSICAL = ("Enterprise", "Site", "Area", "ProcessCell", "Unit")
ISA88_PROCEDURAL = ("Procedure", "UnitProcedure", "Operation", "Phase")


@dataclass(frozen=True)
class Vocabulary:
    """One namespace with its declared class and property local names."""

    label: str
    namespace: str
    classes: tuple[str, ...] = ()
    properties: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.classes + self.properties
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate local names in vocabulary {self.label}")

    def term(self, local: str) -> Iri:
        return Iri(self.namespace + local)


@dataclass(frozen=True)
class AlignmentAxiom:
    kind: str  # "subclass-of" | "same-individual"
    lhs: Iri
    rhs: Iri

    def __post_init__(self):
        if self.kind not in ("subclass-of", "same-individual"):
            raise ValueError(f"unknown alignment kind: {self.kind!r}")
        if self.lhs == self.rhs:
            raise ValueError("alignment axiom must relate two distinct terms")


class Terms:
    """Every well-known IRI, resolved against (possibly overridden) namespaces."""

    def __init__(self, overrides: Optional[Mapping[str, str]] = None):
        ns = dict(DEFAULT_NAMESPACES)
        ns.update(overrides or {})
        self.namespaces = ns

        self.isa88 = Vocabulary(
            "ISA88", ns["ISA88"],
            classes=ISA88_PHYSICAL + ISA88_PROCEDURAL,
            properties=("isRealizedInProcessStage",),
        )
        self.vdi3682 = Vocabulary(
            "VDI3682", ns["VDI3682"],
            classes=("Process", "ProcessOperator", "TechnicalResource", "Product",
                     "Energy", "Information"),
            properties=("hasInput", "hasOutput", "isAssignedTo"),
        )
        self.dinen61360 = Vocabulary(
            "DINEN61360", ns["DINEN61360"],
            classes=("DataElement", "TypeDescription", "InstanceDescription"),
            properties=("hasTypeDescription", "hasInstanceDescription", "Value"),
        )
        self.opcua = Vocabulary(
            "OpcUa", ns["OpcUa"],
            properties=("hasComponent", "organizes", "browseName", "nodeId",
                        "typeDefinition", "histValues"),
        )
        self.vocabularies = (self.isa88, self.vdi3682, self.dinen61360, self.opcua)

        self.rdf_type = Iri(ns["rdf"] + "type")
        self.rdfs_class = Iri(ns["rdfs"] + "Class")
        self.subclass_of = Iri(ns["rdfs"] + "subClassOf")
        self.rdf_property = Iri(ns["rdf"] + "Property")
        # Kept with this exact local name even though the usual term is
        # "sameAs"; queries in the field use this spelling.
        self.same_individual = Iri(ns["owl"] + "sameIndividualAs")

        self.is_realized_in = self.isa88.term("isRealizedInProcessStage")
        self.process = self.vdi3682.term("Process")
        self.technical_resource = self.vdi3682.term("TechnicalResource")
        self.process_operator = self.vdi3682.term("ProcessOperator")
        self.product = self.vdi3682.term("Product")
        self.has_input = self.vdi3682.term("hasInput")
        self.has_output = self.vdi3682.term("hasOutput")
        self.is_assigned_to = self.vdi3682.term("isAssignedTo")
        self.data_element = self.dinen61360.term("DataElement")
        self.type_description = self.dinen61360.term("TypeDescription")
        self.instance_description = self.dinen61360.term("InstanceDescription")
        self.has_type_description = self.dinen61360.term("hasTypeDescription")
        self.has_instance_description = self.dinen61360.term("hasInstanceDescription")
        self.value = self.dinen61360.term("Value")
        self.has_component = self.opcua.term("hasComponent")
        self.organizes = self.opcua.term("organizes")
        self.browse_name = self.opcua.term("browseName")
        self.node_id = self.opcua.term("nodeId")
        self.type_definition = self.opcua.term("typeDefinition")
        self.hist_values = self.opcua.term("histValues")

        self.unit = self.isa88.term("Unit")
        # Use-case individuals living in the plant namespace.
        self.start_time_type = Iri(ns["OpcSS"] + "StartTimeProcess")
        self.end_time_type = Iri(ns["OpcSS"] + "EndTimeProcess")
        self.has_product_type = Iri(ns["OpcSS"] + "hasProductType")

    def prefix_map(self) -> PrefixMap:
        return PrefixMap(self.namespaces)

    def plant(self, local: str) -> Iri:
        return Iri(self.namespaces["OpcSS"] + local)

    def alignment_axioms(self) -> tuple[AlignmentAxiom, ...]:
        """Subclass bridges between the batch-control and process vocabularies."""
        physical = tuple(
            AlignmentAxiom("subclass-of", self.isa88.term(c), self.technical_resource)
            for c in ISA88_PHYSICAL
        )
        procedural = tuple(
            AlignmentAxiom("subclass-of", self.isa88.term(c), self.process_operator)
            for c in ISA88_PROCEDURAL
        )
        return physical + procedural


DEFAULT_TERMS = Terms()


def install(store: TripleStore, terms: Terms = DEFAULT_TERMS) -> int:
    """Write vocabulary declarations and alignment axioms. Idempotent.

    Returns the number of triples actually added.
    """
    added = 0
    for label, ns in terms.namespaces.items():
        store.prefixes.bind(label, ns)
    for vocab in terms.vocabularies:
        for local in vocab.classes:
            added += store.insert(Triple(vocab.term(local), terms.rdf_type, terms.rdfs_class))
        for local in vocab.properties:
            added += store.insert(Triple(vocab.term(local), terms.rdf_type, terms.rdf_property))
    # Identity linking and the use-case product-typing property are not part
    # of any of the three vocabularies but every query relies on them.
    added += store.insert(Triple(terms.same_individual, terms.rdf_type, terms.rdf_property))
    added += store.insert(Triple(terms.has_product_type, terms.rdf_type, terms.rdf_property))
    for axiom in terms.alignment_axioms():
        added += store.insert(Triple(axiom.lhs, terms.subclass_of, axiom.rhs))
    return added


@dataclass(frozen=True)
class MaterializationReport:
    added: int
    iterations: int


def materialize_alignment(store: TripleStore, terms: Terms = DEFAULT_TERMS) -> MaterializationReport:
    """Close instance data over subclass axioms and same-individual symmetry.

    Monotone fixpoint: each pass asserts (a) `x type D` for every `x type C`
    with `C subClassOf D`, and (b) the flipped counterpart of every
    same-individual statement.  Stops when a pass adds nothing; the pass
    that observes no change counts toward `iterations`.
    """
    superclasses: dict[Iri, list[Iri]] = {}
    for t in store.match(None, terms.subclass_of, None):
        if isinstance(t.object, Iri):
            superclasses.setdefault(t.subject, []).append(t.object)

    total_added = 0
    iterations = 0
    while True:
        iterations += 1
        fresh: list[Triple] = []
        for t in store.match(None, terms.rdf_type, None):
            for sup in superclasses.get(t.object, ()):  # type: ignore[arg-type]
                candidate = Triple(t.subject, terms.rdf_type, sup)
                if candidate not in store:
                    fresh.append(candidate)
        for t in store.match(None, terms.same_individual, None):
            if isinstance(t.object, Iri):
                flipped = Triple(t.object, terms.same_individual, t.subject)
                if flipped not in store:
                    fresh.append(flipped)
        added = store.insert_all(fresh)
        total_added += added
        if added == 0:
            return MaterializationReport(total_added, iterations)
