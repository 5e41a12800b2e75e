"""Executed-process descriptions in the knowledge graph.

A process instance links the unit that ran it, the procedure it realizes,
its products, and two timestamp-carrying data elements: the start time
attached as a process input and the end time as a process output (the
asymmetry is deliberate; downstream queries rely on it).  Data elements
split into a type description (shared individual such as
``OpcSS:StartTimeProcess``) and an instance description carrying the value.

The MES-style interchange format is a JSON-lines ledger, one record per
process:

    {"process": "OpcSS:Process1", "unit": "OpcSS:FullMachineTool",
     "procedure": "OpcSS:UnitProcedure1", "procedure_type": "UnitProcedure",
     "start": "2022-02-28T09:00:00Z", "end": "2022-02-28T09:10:00Z",
     "products": [{"product": "OpcSS:Product1", "article": "OpcSS:Article1"}],
     "inputs": [], "outputs": []}

IRIs may be written prefixed (resolved against the configured namespaces)
or absolute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .errors import InvalidRangeError, ParseError, UnknownEntityError, ValidationError
from .rdf import Iri, Literal, Triple, TripleStore
from .timefmt import format_timestamp, parse_timestamp
from .vocab import DEFAULT_TERMS, ISA88_PROCEDURAL, Terms


@dataclass(frozen=True)
class DataElement:
    element: Iri
    type_description: Iri
    instance_value: Literal


@dataclass
class ProcessDescription:
    process: Iri
    assigned_unit: Iri
    realized_procedure: Iri
    start_time: datetime
    end_time: datetime
    product_outputs: list[tuple[Iri, Iri]] = field(default_factory=list)  # (product, article)
    extra_inputs: list[DataElement] = field(default_factory=list)
    extra_outputs: list[DataElement] = field(default_factory=list)


def assert_process(store: TripleStore, desc: ProcessDescription, terms: Terms = DEFAULT_TERMS) -> int:
    """Write one process description into the graph.

    Preconditions: the unit must already be typed as a physical unit, the
    procedure with one of the procedural types, and the process IRI must be
    new.  Returns the number of triples added.
    """
    if desc.start_time >= desc.end_time:
        raise InvalidRangeError(
            f"process {desc.process.value} window is empty: "
            f"{format_timestamp(desc.start_time)} >= {format_timestamp(desc.end_time)}"
        )
    if Triple(desc.process, terms.rdf_type, terms.process) in store:
        raise ValidationError(f"duplicate process: {desc.process.value}")
    if Triple(desc.assigned_unit, terms.rdf_type, terms.unit) not in store:
        raise UnknownEntityError(
            f"assigned unit {desc.assigned_unit.value} is not a known physical unit"
        )
    if not _has_procedural_type(store, desc.realized_procedure, terms):
        raise UnknownEntityError(
            f"{desc.realized_procedure.value} has no procedural type"
        )

    triples = [
        Triple(desc.process, terms.rdf_type, terms.process),
        Triple(desc.realized_procedure, terms.is_realized_in, desc.process),
        Triple(desc.assigned_unit, terms.is_assigned_to, desc.process),
        Triple(terms.start_time_type, terms.rdf_type, terms.type_description),
        Triple(terms.end_time_type, terms.rdf_type, terms.type_description),
    ]
    start_de = DataElement(
        Iri(desc.process.value + "/startTime"),
        terms.start_time_type,
        Literal(format_timestamp(desc.start_time), "dateTime"),
    )
    end_de = DataElement(
        Iri(desc.process.value + "/endTime"),
        terms.end_time_type,
        Literal(format_timestamp(desc.end_time), "dateTime"),
    )
    triples += _data_element_triples(desc.process, start_de, terms.has_input, terms)
    triples += _data_element_triples(desc.process, end_de, terms.has_output, terms)
    for product, article in desc.product_outputs:
        triples.append(Triple(desc.process, terms.has_output, product))
        triples.append(Triple(product, terms.rdf_type, terms.product))
        triples.append(Triple(product, terms.has_product_type, article))
    for element in desc.extra_inputs:
        triples += _data_element_triples(desc.process, element, terms.has_input, terms)
    for element in desc.extra_outputs:
        triples += _data_element_triples(desc.process, element, terms.has_output, terms)
    return store.insert_all(triples)


def _has_procedural_type(store: TripleStore, individual: Iri, terms: Terms) -> bool:
    return any(
        Triple(individual, terms.rdf_type, terms.isa88.term(c)) in store
        for c in ISA88_PROCEDURAL
    )


def _data_element_triples(process: Iri, element: DataElement, link: Iri, terms: Terms) -> list[Triple]:
    instance = Iri(element.element.value + "/instance")
    return [
        Triple(process, link, element.element),
        Triple(element.element, terms.rdf_type, terms.data_element),
        Triple(element.element, terms.has_type_description, element.type_description),
        Triple(element.element, terms.has_instance_description, instance),
        Triple(instance, terms.rdf_type, terms.instance_description),
        Triple(instance, terms.value, element.instance_value),
    ]


def read_window(store: TripleStore, process: Iri, terms: Terms = DEFAULT_TERMS) -> tuple[datetime, datetime]:
    """The asserted [start, end] window of one process."""
    start = _read_time(store, process, terms.has_input, terms.start_time_type, terms)
    end = _read_time(store, process, terms.has_output, terms.end_time_type, terms)
    return start, end


def _read_time(store: TripleStore, process: Iri, link: Iri, type_desc: Iri, terms: Terms) -> datetime:
    for element in store.objects(process, link):
        if not isinstance(element, Iri):
            continue
        if Triple(element, terms.has_type_description, type_desc) not in store:
            continue
        for inst in store.objects(element, terms.has_instance_description):
            if not isinstance(inst, Iri):
                continue
            for value in store.objects(inst, terms.value):
                if isinstance(value, Literal):
                    try:
                        return parse_timestamp(value.lexical)
                    except ValueError as exc:
                        raise ParseError(
                            f"process {process.value}: bad timestamp in "
                            f"{type_desc.value}: {exc}"
                        ) from None
    local = type_desc.value.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    raise UnknownEntityError(f"process {process.value} has no {local} data element")


def list_processes(
    store: TripleStore,
    unit: Optional[Iri] = None,
    procedure: Optional[Iri] = None,
    article: Optional[Iri] = None,
    terms: Terms = DEFAULT_TERMS,
) -> list[Iri]:
    """Processes matching every given criterion, sorted by start time."""
    out = []
    for candidate in store.subjects(terms.rdf_type, terms.process):
        if unit is not None and Triple(unit, terms.is_assigned_to, candidate) not in store:
            continue
        if procedure is not None and Triple(procedure, terms.is_realized_in, candidate) not in store:
            continue
        if article is not None and not _outputs_article(store, candidate, article, terms):
            continue
        out.append(candidate)
    out.sort(key=lambda p: (read_window(store, p, terms)[0], p.value))
    return out


def _outputs_article(store: TripleStore, process: Iri, article: Iri, terms: Terms) -> bool:
    return any(
        isinstance(product, Iri) and Triple(product, terms.has_product_type, article) in store
        for product in store.objects(process, terms.has_output)
    )


# -- JSON-lines ledger -----------------------------------------------------


def load_ledger(store: TripleStore, document: str, terms: Terms = DEFAULT_TERMS) -> int:
    """Assert every ledger record; returns the number of processes loaded.

    The loader also asserts the physical/procedural typing of the units and
    procedures each record names, since the ledger is the artifact that
    carries that plant knowledge.
    """
    count = 0
    for lineno, raw in enumerate(document.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad ledger JSON: {exc.msg}", line=lineno) from None
        try:
            desc, procedure_type = _record_to_description(record, terms)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad ledger record: {exc}", line=lineno) from None
        store.insert(Triple(desc.assigned_unit, terms.rdf_type, terms.unit))
        store.insert(Triple(desc.realized_procedure, terms.rdf_type, terms.isa88.term(procedure_type)))
        assert_process(store, desc, terms)
        count += 1
    return count


def _record_to_description(record: dict, terms: Terms) -> tuple[ProcessDescription, str]:
    prefixes = terms.prefix_map()
    procedure_type = record.get("procedure_type", "UnitProcedure")
    if procedure_type not in ISA88_PROCEDURAL:
        raise ValueError(f"unknown procedure_type {procedure_type!r}")
    desc = ProcessDescription(
        process=prefixes.resolve(record["process"]),
        assigned_unit=prefixes.resolve(record["unit"]),
        realized_procedure=prefixes.resolve(record["procedure"]),
        start_time=parse_timestamp(record["start"]),
        end_time=parse_timestamp(record["end"]),
        product_outputs=[
            (prefixes.resolve(p["product"]), prefixes.resolve(p["article"]))
            for p in record.get("products", [])
        ],
        extra_inputs=[_record_to_element(e, prefixes) for e in record.get("inputs", [])],
        extra_outputs=[_record_to_element(e, prefixes) for e in record.get("outputs", [])],
    )
    return desc, procedure_type


def _record_to_element(entry: dict, prefixes) -> DataElement:
    value = entry["value"]
    return DataElement(
        element=prefixes.resolve(entry["element"]),
        type_description=prefixes.resolve(entry["type"]),
        instance_value=Literal(value["lexical"], value["kind"]),
    )


def dump_ledger(records: list[dict]) -> str:
    """Serialize ledger records (already in wire shape) to JSON lines."""
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
