from datetime import timedelta

import pytest

from oracles import scan_log
from tracekg.errors import InvalidRangeError, UnknownEntityError
from tracekg.histvalues import default_registry
from tracekg.queries import machine_window_query, procedure_query, product_query, variables_query
from tracekg.query import evaluate, parse_query
from tracekg.rdf import Iri, Literal, Triple, TripleStore
from tracekg.timefmt import format_timestamp, parse_timestamp
from tracekg.traces import (
    export_traces,
    machine_trace,
    parse_traces,
    traces_by_procedure,
    traces_by_product,
    variables_of_machine,
)
from tracekg.tsdb import value_lexical
from tracekg.vocab import DEFAULT_TERMS as T
from tracekg.vocab import install

MACHINE = T.plant("FullMachineTool")


def _query_rows(store, ts, text):
    table = evaluate(store, parse_query(text), default_registry(ts))
    return [dict(zip(table.columns, row)) for row in table.rows]


def _event_key(event, process):
    return (
        format_timestamp(event.timestamp),
        value_lexical(event.value),
        event.node_id,
        event.browse_name,
        process.value,
    )


def _row_key(row):
    return (
        row["Time"].lexical,
        row["Value"].lexical,
        row["NodeId"].lexical,
        row["BrowseName"].lexical,
        row["Process"].value,
    )


def test_variables_of_machine_matches_fixture(default_stores, default_artifacts):
    store, _ = default_stores
    truth = default_artifacts.truth.machines[0]
    got = {(v.node_id, v.browse_name) for v in variables_of_machine(store, MACHINE)}
    assert got == set(truth.qualifying())
    assert ("ns=7;i=56620", "SerialNumber") not in got  # unqualified type


def test_variables_equal_query_route(default_stores):
    store, _ = default_stores
    api = {(v.node_id, v.browse_name) for v in variables_of_machine(store, MACHINE)}
    rows = evaluate(store, parse_query(variables_query(MACHINE))).rows
    assert {(r[0].lexical, r[1].lexical) for r in rows} == api


def test_machine_without_variables_gives_empty_list():
    store = TripleStore()
    install(store)
    lonely = T.plant("LonelyMachine")
    model_node = Iri("http://example.org/machines/node/x")
    store.insert(Triple(model_node, T.same_individual, lonely))
    store.insert(Triple(model_node, T.node_id, Literal("x")))
    assert variables_of_machine(store, lonely) == []


def test_unlinked_machine_is_an_error():
    store = TripleStore()
    install(store)
    with pytest.raises(UnknownEntityError, match="identity link"):
        variables_of_machine(store, T.plant("GhostMachine"))


def test_machine_trace_matches_log_scan(default_stores, default_artifacts):
    store, ts = default_stores
    truth = default_artifacts.truth.machines[0]
    start = truth.events[0].timestamp
    end = truth.events[-1].timestamp
    trace = machine_trace(store, ts, MACHINE, start, end)

    full_log = [(e.timestamp, e.node_id, e.value) for e in truth.events]
    expected = scan_log(full_log, {n for n, _ in truth.qualifying()}, start, end)
    assert [(e.timestamp, e.node_id, e.value) for e in trace.events] == expected
    assert trace.process.value.startswith("urn:window:")
    assert trace.window == (start, end)


def test_machine_trace_equals_query_route(default_stores, default_artifacts):
    store, ts = default_stores
    truth = default_artifacts.truth.machines[0]
    start = truth.events[10].timestamp
    end = truth.events[-10].timestamp
    trace = machine_trace(store, ts, MACHINE, start, end)
    rows = _query_rows(store, ts, machine_window_query(MACHINE, start, end))
    api = {(format_timestamp(e.timestamp), value_lexical(e.value), e.node_id, e.browse_name)
           for e in trace.events}
    route = {(r["Time"].lexical, r["Value"].lexical, r["NodeId"].lexical, r["BrowseName"].lexical)
             for r in rows}
    assert api == route


def test_zero_width_window_catches_exact_tie(default_stores, default_artifacts):
    store, ts = default_stores
    event = default_artifacts.truth.machines[0].events[5]
    trace = machine_trace(store, ts, MACHINE, event.timestamp, event.timestamp)
    assert [(e.timestamp, e.node_id) for e in trace.events] == [(event.timestamp, event.node_id)]


def test_machine_trace_rejects_inverted_window(default_stores):
    store, ts = default_stores
    t = parse_timestamp("2022-02-28T09:00:00Z")
    with pytest.raises(InvalidRangeError):
        machine_trace(store, ts, MACHINE, t, t - timedelta(seconds=1))


def test_traces_by_procedure_matches_ground_truth(default_stores, default_artifacts):
    store, ts = default_stores
    procedure = T.plant("UnitProcedure1")
    traces = traces_by_procedure(store, ts, MACHINE, procedure)
    truth = [p for p in default_artifacts.truth.processes if p.procedure == procedure]
    assert [t.process for t in traces] == [p.process for p in truth]  # sorted by start
    for trace, expected in zip(traces, truth):
        assert trace.window == (expected.start, expected.end)
        assert [(e.timestamp, e.node_id, e.value) for e in trace.events] == [
            (e.timestamp, e.node_id, e.value) for e in expected.events
        ]


def test_traces_by_procedure_equals_query_route(default_stores):
    store, ts = default_stores
    procedure = T.plant("UnitProcedure1")
    traces = traces_by_procedure(store, ts, MACHINE, procedure)
    rows = _query_rows(store, ts, procedure_query(MACHINE, procedure))
    api = {_event_key(e, t.process) for t in traces for e in t.events}
    assert api == {_row_key(r) for r in rows}


def test_unexecuted_procedure_gives_no_traces(default_stores):
    store, ts = default_stores
    assert traces_by_procedure(store, ts, MACHINE, T.plant("UnitProcedure9")) == []


def test_traces_by_product_matches_ground_truth(default_stores, default_artifacts):
    store, ts = default_stores
    article = T.plant("Article1")
    traces = traces_by_product(store, ts, MACHINE, article)
    truth = [p for p in default_artifacts.truth.processes if p.article == article]
    assert [t.process for t in traces] == [p.process for p in truth]


def test_traces_by_product_equals_query_route(default_stores):
    store, ts = default_stores
    article = T.plant("Article1")
    traces = traces_by_product(store, ts, MACHINE, article)
    rows = _query_rows(store, ts, product_query(MACHINE, article))
    api = {_event_key(e, t.process) for t in traces for e in t.events}
    assert api == {_row_key(r) for r in rows}


def test_unknown_article_gives_no_traces(default_stores):
    store, ts = default_stores
    assert traces_by_product(store, ts, MACHINE, T.plant("Article9")) == []


def test_no_event_escapes_its_window_and_union_is_contained(default_stores, default_artifacts):
    store, ts = default_stores
    procedure = T.plant("UnitProcedure1")
    traces = traces_by_procedure(store, ts, MACHINE, procedure)
    truth = default_artifacts.truth.machines[0]
    covering = machine_trace(
        store, ts, MACHINE, truth.events[0].timestamp, truth.events[-1].timestamp
    )
    covering_keys = {(e.timestamp, e.node_id, e.value) for e in covering.events}
    for trace in traces:
        for event in trace.events:
            assert trace.window[0] <= event.timestamp <= trace.window[1]
            assert (event.timestamp, event.node_id, event.value) in covering_keys


def test_csv_export_shape(default_stores):
    store, ts = default_stores
    traces = traces_by_procedure(store, ts, MACHINE, T.plant("UnitProcedure1"))
    text = export_traces(traces, "csv")
    lines = text.splitlines()
    assert lines[0] == "Time,Value,NodeId,BrowseName,Process"
    assert len(lines) == 1 + sum(len(t.events) for t in traces)
    assert all(line.endswith(("Process1", "Process4")) for line in lines[1:])


def test_csv_export_of_nothing_is_header_only():
    assert export_traces([], "csv") == "Time,Value,NodeId,BrowseName,Process\n"
    assert export_traces([], "json-lines") == ""


def test_json_lines_round_trip(default_stores):
    store, ts = default_stores
    traces = traces_by_procedure(store, ts, MACHINE, T.plant("UnitProcedure1"))
    text = export_traces(traces, "json-lines")
    parsed = parse_traces(text)
    assert parsed == traces
    assert export_traces(parsed, "json-lines") == text


def test_unknown_export_format_is_rejected(default_stores):
    with pytest.raises(ValueError, match="format"):
        export_traces([], "xml")
