"""tracekg: process-scoped event traces from logged industrial variable changes.

A plant knowledge graph (structure vocabularies, an ingested machine
information model, and executed-process descriptions) is queried through a
small graph-pattern language whose `histValues` property function reaches
into an embedded time-series store.
"""

from .errors import (
    EvaluationError,
    InvalidRangeError,
    ParseError,
    StorageError,
    TraceKgError,
    UnknownEntityError,
    ValidationError,
)
from .histvalues import HistCall, default_registry, hist_values
from .nodeset import MachineEntry, ReferenceEdge, UaNode, parse_nodeset, to_triples
from .process import (
    DataElement,
    ProcessDescription,
    assert_process,
    list_processes,
    load_ledger,
    read_window,
)
from .queries import machine_window_query, procedure_query, product_query, variables_query
from .query import (
    FunctionRegistry,
    Query,
    ResultTable,
    Var,
    eval_zero_or_more,
    evaluate,
    format_query,
    parse_query,
)
from .rdf import Iri, Literal, PrefixMap, Term, Triple, TripleStore
from .simulate import ScenarioConfig, default_config, generate
from .timefmt import format_timestamp, parse_timestamp
from .traces import (
    EventTrace,
    TraceEvent,
    export_traces,
    machine_trace,
    parse_traces,
    traces_by_procedure,
    traces_by_product,
    variables_of_machine,
)
from .tsdb import TimeSeriesStore, ValueChange
from .vocab import DEFAULT_TERMS, Terms, install, materialize_alignment

__version__ = "0.1.0"
