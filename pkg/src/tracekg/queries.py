"""Canonical query texts for the competency questions.

These builders produce plain query-language text; feeding them through
`parse_query` and `evaluate` is the reference route against which the
`traces` module's direct API is tested.  Variable names are consistent,
including their case: the select list and ORDER BY always agree.
"""

from __future__ import annotations

from datetime import datetime

from .rdf import Iri
from .timefmt import format_timestamp
from .vocab import DEFAULT_TERMS, QUALIFYING_TYPE_DEFINITIONS, Terms


def _prefix_block(terms: Terms) -> str:
    return "".join(
        f"PREFIX {label}: <{ns}>\n" for label, ns in sorted(terms.namespaces.items())
    )


def _ref(iri: Iri, terms: Terms) -> str:
    compacted = terms.prefix_map().compact(iri)
    return compacted if compacted is not None else f"<{iri.value}>"


def _type_filter() -> str:
    tests = " ||\n          ".join(
        f'?nodeclass = "{name}"' for name in QUALIFYING_TYPE_DEFINITIONS
    )
    return f"  FILTER ( {tests} ) ."


def variables_query(machine: Iri, terms: Terms = DEFAULT_TERMS) -> str:
    """Which variables belong to the machine (no history access)."""
    return f"""{_prefix_block(terms)}
SELECT ?NodeId ?BrowseName
WHERE {{
  # machine identity into the information model
  ?urnid owl:sameIndividualAs {_ref(machine, terms)} .

  # component-reachable variables and their descriptors
  ?urnid OpcUa:hasComponent* ?node .
  ?node OpcUa:browseName ?BrowseName .
  ?node OpcUa:nodeId ?NodeId .
  ?node OpcUa:typeDefinition ?nodeclass .
{_type_filter()}
}}
"""


def machine_window_query(machine: Iri, start: datetime, end: datetime,
                         terms: Terms = DEFAULT_TERMS) -> str:
    """Which events were recorded at the machine inside a fixed window."""
    return f"""{_prefix_block(terms)}
SELECT ?NodeId ?BrowseName ?Time ?Value
WHERE {{
  # machine identity into the information model
  ?urnid owl:sameIndividualAs {_ref(machine, terms)} .

  # component-reachable variables and their descriptors
  ?urnid OpcUa:hasComponent* ?node .
  ?node OpcUa:browseName ?BrowseName .
  ?node OpcUa:nodeId ?NodeId .
  ?node OpcUa:typeDefinition ?nodeclass .
{_type_filter()}

  # logged value changes in the window
  ?node OpcUa:histValues ( ?Time ?Value
                           "{format_timestamp(start)}"
                           "{format_timestamp(end)}" ) .
}}
ORDER BY ASC(?Time)
"""


def _process_scoped_body(terms: Terms) -> str:
    return f"""  # process window data elements
  ?Process VDI3682:hasInput ?stimeDE .
  ?stimeDE DINEN61360:hasTypeDescription {_ref(terms.start_time_type, terms)} ;
           DINEN61360:hasInstanceDescription / DINEN61360:Value ?starttime .
  ?Process VDI3682:hasOutput ?etimeDE .
  ?etimeDE DINEN61360:hasTypeDescription {_ref(terms.end_time_type, terms)} ;
           DINEN61360:hasInstanceDescription / DINEN61360:Value ?endtime .
  ?Process a VDI3682:Process .

  # component-reachable variables of the unit
  ?urnid owl:sameIndividualAs ?unit .
  ?urnid OpcUa:hasComponent* ?node .
  ?node OpcUa:browseName ?BrowseName ;
        OpcUa:typeDefinition ?nodeclass ;
        OpcUa:nodeId ?NodeId .
{_type_filter()}

  # logged value changes inside each process window
  ?node OpcUa:histValues ( ?Time ?Value ?starttime ?endtime ) .
}}
ORDER BY ASC(?Time)
"""


def procedure_query(unit: Iri, procedure: Iri, terms: Terms = DEFAULT_TERMS) -> str:
    """Events during every process realizing one procedure on one unit."""
    return f"""{_prefix_block(terms)}
SELECT ?Time ?Value ?NodeId ?BrowseName ?Process
WHERE {{
  # processes realizing the procedure on the unit
  ?proc ISA88:isRealizedInProcessStage ?Process .
  ?unit VDI3682:isAssignedTo ?Process .
  FILTER ( ?proc = {_ref(procedure, terms)} ) .
  FILTER ( ?unit = {_ref(unit, terms)} ) .

{_process_scoped_body(terms)}"""


def product_query(unit: Iri, article: Iri, terms: Terms = DEFAULT_TERMS) -> str:
    """Events during every process on one unit that output one article type."""
    return f"""{_prefix_block(terms)}
SELECT ?Time ?Value ?NodeId ?BrowseName ?Process
WHERE {{
  # processes on the unit producing the article
  ?proc ISA88:isRealizedInProcessStage ?Process .
  ?unit VDI3682:isAssignedTo ?Process .
  ?Process VDI3682:hasOutput ?Product .
  ?Product OpcSS:hasProductType ?article .
  FILTER ( ?article = {_ref(article, terms)} ) .
  FILTER ( ?unit = {_ref(unit, terms)} ) .

{_process_scoped_body(terms)}"""
