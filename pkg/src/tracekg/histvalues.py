"""The `histValues` property function: graph node -> logged value changes.

Given a bound information-model node, the function resolves the node's id
literal from the graph and expands the current row with one binding per
logged change inside a closed time window.  Timestamps are re-serialized
to the canonical RFC 3339 form on the way out, so result tables are
byte-stable no matter how the log was written.

Call shape inside a query (start/end may be literals or bound variables):

    ?node OpcUa:histValues ( ?Time ?Value "2022-02-28T09:00:00Z" "2022-02-28T09:10:00Z" ) .
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .errors import EvaluationError, UnknownEntityError
from .query import Binding, FunctionRegistry, TermOrVar, Var
from .rdf import Iri, Literal, Term, TripleStore
from .timefmt import format_timestamp, parse_timestamp
from .tsdb import TimeSeriesStore, value_literal
from .vocab import DEFAULT_TERMS, Terms


@dataclass(frozen=True)
class HistCall:
    node: Iri
    time_var: str
    value_var: str
    start: datetime
    end: datetime


def hist_values(store: TripleStore, ts: TimeSeriesStore, call: HistCall,
                terms: Terms = DEFAULT_TERMS) -> list[Binding]:
    """One binding per value change of `call.node` in [start, end].

    Zero bindings is a normal outcome (the row group contributes no rows);
    a node without a node-id literal is an error.
    """
    node_id = resolve_node_id(store, call.node, terms)
    out = []
    for change in ts.range_query(node_id, call.start, call.end):
        out.append({
            call.time_var: Literal(format_timestamp(change.timestamp), "dateTime"),
            call.value_var: value_literal(change.value),
        })
    return out


def resolve_node_id(store: TripleStore, node: Iri, terms: Terms = DEFAULT_TERMS) -> str:
    for value in store.objects(node, terms.node_id):
        if isinstance(value, Literal):
            return value.lexical
    raise UnknownEntityError(f"node {node.value} carries no node-id literal")


def make_hist_values_function(ts: TimeSeriesStore, terms: Terms = DEFAULT_TERMS):
    """Adapt `hist_values` to the query engine's property-function protocol."""

    def function(store: TripleStore, subject: Term, args: tuple[TermOrVar, ...]) -> list[Binding]:
        call = _to_call(subject, args, terms)
        produced = hist_values(store, ts, call, terms)
        return _join_out_args(produced, args)

    return function


def _to_call(subject: Term, args: tuple[TermOrVar, ...], terms: Terms) -> HistCall:
    name = terms.hist_values.value
    if not isinstance(subject, Iri):
        raise EvaluationError(f"{name} subject must be an information-model node IRI")
    if len(args) != 4:
        raise EvaluationError(f"{name} takes (time value start end), got {len(args)} arguments")
    time_arg, value_arg, start_arg, end_arg = args
    return HistCall(
        node=subject,
        time_var=time_arg.name if isinstance(time_arg, Var) else "__time",
        value_var=value_arg.name if isinstance(value_arg, Var) else "__value",
        start=_window_bound(start_arg, "start", name),
        end=_window_bound(end_arg, "end", name),
    )


def _window_bound(arg: TermOrVar, which: str, name: str) -> datetime:
    if isinstance(arg, Var):
        raise EvaluationError(f"{name} {which} argument ?{arg.name} is unbound at call time")
    if not isinstance(arg, Literal):
        raise EvaluationError(f"{name} {which} argument must be a timestamp literal")
    try:
        return parse_timestamp(arg.lexical)
    except ValueError as exc:
        raise EvaluationError(f"{name} {which} argument: {exc}") from None


def _join_out_args(produced: list[Binding], args: tuple[TermOrVar, ...]) -> list[Binding]:
    """Honor join semantics when time/value positions arrived already bound."""
    time_arg, value_arg = args[0], args[1]
    out = []
    for binding in produced:
        if not isinstance(time_arg, Var):
            if binding.pop("__time") != time_arg:
                continue
        if not isinstance(value_arg, Var):
            if binding.pop("__value") != value_arg:
                continue
        out.append(binding)
    return out


def default_registry(ts: TimeSeriesStore, terms: Terms = DEFAULT_TERMS) -> FunctionRegistry:
    registry = FunctionRegistry()
    registry.register(terms.hist_values, make_hist_values_function(ts, terms))
    return registry
