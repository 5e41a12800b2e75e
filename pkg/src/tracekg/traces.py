"""Process-scoped event traces: the high-level answers to the competency questions.

Every operation here walks the graph directly through `TripleStore.match`
rather than going through the query engine; tests hold the two routes to
result-set equality, which only means something because they share no
evaluation code.

Traces export to CSV (columns Time,Value,NodeId,BrowseName,Process, one
row per event, traces concatenated) or to JSON lines (one trace per line,
round-trippable through `parse_traces`).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime

from .errors import InvalidRangeError, ParseError, UnknownEntityError
from .process import list_processes, read_window
from .rdf import Iri, Literal, TripleStore
from .timefmt import format_timestamp, parse_timestamp
from .tsdb import TimeSeriesStore, Value, value_lexical
from .vocab import DEFAULT_TERMS, QUALIFYING_TYPE_DEFINITIONS, Terms

TRACE_CSV_HEADER = ("Time", "Value", "NodeId", "BrowseName", "Process")


@dataclass(frozen=True)
class MachineVariable:
    node: Iri
    node_id: str
    browse_name: str


@dataclass(frozen=True)
class TraceEvent:
    timestamp: datetime
    node_id: str
    browse_name: str
    value: Value


@dataclass
class EventTrace:
    process: Iri  # a process individual, or a synthetic window id
    window: tuple[datetime, datetime]
    events: list[TraceEvent]


def variables_of_machine(store: TripleStore, machine: Iri,
                         terms: Terms = DEFAULT_TERMS) -> list[MachineVariable]:
    """All logged-variable nodes of a machine, sorted by node id.

    The machine individual must be identity-linked into the information
    model; from its model node every component-reachable node with a
    qualifying type definition, a node id and a browse name is returned.
    """
    entry_points = [
        t.subject for t in store.match(None, terms.same_individual, machine)
    ]
    if not entry_points:
        raise UnknownEntityError(
            f"machine {machine.value} has no identity link into the information model"
        )
    reachable: set[Iri] = set()
    for start in entry_points:
        frontier = [start]
        reachable.add(start)
        while frontier:
            node = frontier.pop()
            for t in store.match(node, terms.has_component, None):
                if isinstance(t.object, Iri) and t.object not in reachable:
                    reachable.add(t.object)
                    frontier.append(t.object)

    out = []
    for node in reachable:
        type_def = _string_object(store, node, terms.type_definition)
        if type_def not in QUALIFYING_TYPE_DEFINITIONS:
            continue
        node_id = _string_object(store, node, terms.node_id)
        browse_name = _string_object(store, node, terms.browse_name)
        if node_id is None or browse_name is None:
            continue
        out.append(MachineVariable(node, node_id, browse_name))
    out.sort(key=lambda v: v.node_id)
    return out


def _string_object(store: TripleStore, subject: Iri, predicate: Iri) -> str | None:
    for value in store.objects(subject, predicate):
        if isinstance(value, Literal):
            return value.lexical
    return None


def machine_trace(store: TripleStore, ts: TimeSeriesStore, machine: Iri,
                  start: datetime, end: datetime,
                  terms: Terms = DEFAULT_TERMS) -> EventTrace:
    """Every value change of every qualifying variable in the closed window."""
    if start > end:
        raise InvalidRangeError(
            f"trace window start {format_timestamp(start)} is after end {format_timestamp(end)}"
        )
    variables = variables_of_machine(store, machine, terms)
    window_id = Iri(f"urn:window:{format_timestamp(start)}/{format_timestamp(end)}")
    return EventTrace(window_id, (start, end), _collect(ts, variables, start, end))


def _collect(ts: TimeSeriesStore, variables: list[MachineVariable],
             start: datetime, end: datetime) -> list[TraceEvent]:
    keyed = []
    for variable in variables:
        for record in ts.range_records(variable.node_id, start, end):
            event = TraceEvent(
                record.change.timestamp, variable.node_id,
                variable.browse_name, record.change.value,
            )
            keyed.append(((record.change.timestamp, record.seq, variable.node_id), event))
    keyed.sort(key=lambda pair: pair[0])
    return [event for _, event in keyed]


def traces_by_procedure(store: TripleStore, ts: TimeSeriesStore, unit: Iri,
                        procedure: Iri, terms: Terms = DEFAULT_TERMS) -> list[EventTrace]:
    """One trace per process instance realizing `procedure` on `unit`."""
    processes = list_processes(store, unit=unit, procedure=procedure, terms=terms)
    return _traces_for(store, ts, unit, processes, terms)


def traces_by_product(store: TripleStore, ts: TimeSeriesStore, unit: Iri,
                      article: Iri, terms: Terms = DEFAULT_TERMS) -> list[EventTrace]:
    """One trace per process instance on `unit` that output the article type."""
    processes = list_processes(store, unit=unit, article=article, terms=terms)
    return _traces_for(store, ts, unit, processes, terms)


def _traces_for(store: TripleStore, ts: TimeSeriesStore, unit: Iri,
                processes: list[Iri], terms: Terms) -> list[EventTrace]:
    if not processes:
        return []
    variables = variables_of_machine(store, unit, terms)
    out = []
    for process in processes:
        start, end = read_window(store, process, terms)
        out.append(EventTrace(process, (start, end), _collect(ts, variables, start, end)))
    return out


# -- export / parse ----------------------------------------------------------


def export_traces(traces: list[EventTrace], format: str = "csv") -> str:
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(TRACE_CSV_HEADER)
        for trace in traces:
            for event in trace.events:
                writer.writerow([
                    format_timestamp(event.timestamp),
                    value_lexical(event.value),
                    event.node_id,
                    event.browse_name,
                    trace.process.value,
                ])
        return out.getvalue()
    if format == "json-lines":
        lines = []
        for trace in traces:
            lines.append(json.dumps({
                "process": trace.process.value,
                "window": [format_timestamp(trace.window[0]), format_timestamp(trace.window[1])],
                "events": [
                    {
                        "time": format_timestamp(e.timestamp),
                        "node_id": e.node_id,
                        "browse_name": e.browse_name,
                        "value": e.value,
                    }
                    for e in trace.events
                ],
            }, ensure_ascii=False))
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown trace export format: {format!r}")


def parse_traces(document: str) -> list[EventTrace]:
    """Inverse of the json-lines export."""
    traces = []
    for lineno, raw in enumerate(document.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            events = [
                TraceEvent(parse_timestamp(e["time"]), e["node_id"],
                           e["browse_name"], e["value"])
                for e in record["events"]
            ]
            traces.append(EventTrace(
                Iri(record["process"]),
                (parse_timestamp(record["window"][0]), parse_timestamp(record["window"][1])),
                events,
            ))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad trace record: {exc}", line=lineno) from None
    return traces
