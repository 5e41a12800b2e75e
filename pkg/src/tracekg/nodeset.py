"""Information-model ingest: XML node documents -> graph triples.

The accepted XML subset (see tests/fixtures/nodeset_annotated.xml for a
commented example):

    <Nodes>
      <Object NodeId="..." BrowseName="..." [TypeDefinition="..."]>
        <Reference Kind="hasComponent|organizes" Target="node-id"/> ...
      </Object>
      <Variable NodeId="..." BrowseName="..." TypeDefinition="...">
        <Reference .../> ...
      </Variable>
      <MachinesFolder>
        <Machine NodeId="..." Identity="iri" DisplayName="..."/> ...
      </MachinesFolder>
    </Nodes>

Node ids are opaque strings (`ns=7;i=56510`).  Each node is minted an IRI
by URL-encoding its node id under the configured node namespace, so the
id doubles as the lookup key into the value-change log.
"""

from __future__ import annotations

import urllib.parse
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import ParseError
from .rdf import Iri, Literal, Triple
from .vocab import DEFAULT_TERMS, Terms

REFERENCE_KINDS = ("hasComponent", "organizes")
DEFAULT_OBJECT_TYPE = "FolderType"


@dataclass(frozen=True)
class ReferenceEdge:
    kind: str
    target: str


@dataclass
class UaNode:
    node_id: str
    browse_name: str
    node_class: str  # "Object" | "Variable"
    type_definition: str
    references: list[ReferenceEdge] = field(default_factory=list)


@dataclass(frozen=True)
class MachineEntry:
    machine_node: str
    identity_iri: Iri
    display_name: str


def node_iri(node_id: str, terms: Terms = DEFAULT_TERMS) -> Iri:
    return Iri(terms.namespaces["node"] + urllib.parse.quote(node_id, safe=""))


def parse_nodeset(document: str, terms: Terms = DEFAULT_TERMS) -> tuple[list[UaNode], list[MachineEntry]]:
    """Parse one information-model document.

    Every reference target and machine node id must exist in the same
    document; dangling ids are rejected with the missing target named.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}") from None
    if root.tag != "Nodes":
        raise ParseError(f"expected <Nodes> root, found <{root.tag}>")

    nodes: list[UaNode] = []
    machines: list[MachineEntry] = []
    seen: set[str] = set()
    for index, element in enumerate(root):
        path = f"Nodes/{element.tag}[{index}]"
        if element.tag in ("Object", "Variable"):
            nodes.append(_parse_node(element, path, seen))
        elif element.tag == "MachinesFolder":
            machines.extend(_parse_machines(element, path))
        else:
            raise ParseError(f"unexpected element <{element.tag}> at {path}")

    ids = {n.node_id for n in nodes}
    for node in nodes:
        for ref in node.references:
            if ref.target not in ids:
                raise ParseError(
                    f"node {node.node_id!r} references missing target {ref.target!r}"
                )
    for machine in machines:
        if machine.machine_node not in ids:
            raise ParseError(
                f"machines folder names missing node {machine.machine_node!r}"
            )
    return nodes, machines


def _require(element: ET.Element, attr: str, path: str) -> str:
    value = element.get(attr)
    if not value:
        raise ParseError(f"missing attribute {attr!r} at {path}")
    return value


def _parse_node(element: ET.Element, path: str, seen: set[str]) -> UaNode:
    node_id = _require(element, "NodeId", path)
    if node_id in seen:
        raise ParseError(f"duplicate NodeId {node_id!r} at {path}")
    seen.add(node_id)
    browse = _require(element, "BrowseName", path)
    if element.tag == "Variable":
        type_def = _require(element, "TypeDefinition", path)
    else:
        type_def = element.get("TypeDefinition") or DEFAULT_OBJECT_TYPE
    refs = []
    for rindex, child in enumerate(element):
        rpath = f"{path}/Reference[{rindex}]"
        if child.tag != "Reference":
            raise ParseError(f"unexpected element <{child.tag}> at {rpath}")
        kind = _require(child, "Kind", rpath)
        if kind not in REFERENCE_KINDS:
            raise ParseError(f"unknown reference kind {kind!r} at {rpath}")
        refs.append(ReferenceEdge(kind, _require(child, "Target", rpath)))
    return UaNode(node_id, browse, element.tag, type_def, refs)


def _parse_machines(element: ET.Element, path: str) -> list[MachineEntry]:
    entries = []
    for index, child in enumerate(element):
        cpath = f"{path}/Machine[{index}]"
        if child.tag != "Machine":
            raise ParseError(f"unexpected element <{child.tag}> at {cpath}")
        try:
            identity = Iri(_require(child, "Identity", cpath))
        except ValueError as exc:
            raise ParseError(f"{exc} at {cpath}") from None
        entries.append(
            MachineEntry(
                machine_node=_require(child, "NodeId", cpath),
                identity_iri=identity,
                display_name=child.get("DisplayName", ""),
            )
        )
    return entries


def to_triples(
    nodes: list[UaNode],
    machines: list[MachineEntry],
    terms: Terms = DEFAULT_TERMS,
) -> list[Triple]:
    """Convert parsed nodes to triples, canonically ordered.

    Exactly 3 triples per node (id, browse name, type definition), one per
    reference, and one identity link per machine.
    """
    triples: list[Triple] = []
    for node in nodes:
        iri = node_iri(node.node_id, terms)
        triples.append(Triple(iri, terms.node_id, Literal(node.node_id)))
        triples.append(Triple(iri, terms.browse_name, Literal(node.browse_name)))
        triples.append(Triple(iri, terms.type_definition, Literal(node.type_definition)))
        for ref in node.references:
            predicate = terms.has_component if ref.kind == "hasComponent" else terms.organizes
            triples.append(Triple(iri, predicate, node_iri(ref.target, terms)))
    for machine in machines:
        triples.append(
            Triple(machine.identity_iri, terms.same_individual, node_iri(machine.machine_node, terms))
        )
    triples.sort(key=Triple.sort_key)
    return triples
