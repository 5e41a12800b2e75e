"""Command-line front end wiring the pipeline together.

A workspace directory holds the materialized graph (`graph.lt`), the
value-change segments (`tsdata/`), and an optional `config` file with
``key = value`` lines (namespace overrides as ``prefix.<label>``, plus
``graph_file`` / ``ts_dir`` path overrides).  Commands are re-runnable;
mutating commands take a lock file so two writers cannot race.

Exit codes: 0 ok, 1 other error, 2 parse error, 3 missing entity,
4 invalid range, 5 I/O.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import histvalues, nodeset, process, queries, simulate, traces, vocab
from .errors import (
    ParseError,
    StorageError,
    TraceKgError,
    UnknownEntityError,
    ValidationError,
)
from .query import evaluate, parse_query
from .rdf import Iri, TripleStore
from .timefmt import parse_timestamp
from .tsdb import TimeSeriesStore

ENV_WORKSPACE = "TRACEKG_WORKSPACE"


class Workspace:
    def __init__(self, root: Path):
        self.root = root
        self.config = self._read_config()
        self.terms = vocab.Terms(self.config.get("prefixes"))
        self.graph_file = root / self.config.get("graph_file", "graph.lt")
        self.ts_dir = root / self.config.get("ts_dir", "tsdata")

    def _read_config(self) -> dict:
        path = self.root / "config"
        if not path.exists():
            return {}
        out: dict = {"prefixes": {}}
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep or not key or not value:
                raise ParseError(f"bad config line: {raw!r}", line=lineno)
            if key.startswith("prefix."):
                out["prefixes"][key[len("prefix."):]] = value
            else:
                out[key] = value
        return out

    def require_initialized(self) -> None:
        if not self.graph_file.exists():
            raise UnknownEntityError(
                f"workspace {self.root} is not initialized (run 'tracekg init' first)"
            )

    def load_store(self) -> TripleStore:
        self.require_initialized()
        store = TripleStore()
        try:
            store.load(self.graph_file.read_text(encoding="utf-8"))
        except OSError as exc:
            raise StorageError(f"cannot read {self.graph_file}: {exc}") from None
        return store

    def save_store(self, store: TripleStore) -> None:
        try:
            self.graph_file.write_text(store.export(), encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot write {self.graph_file}: {exc}") from None

    def open_ts(self) -> TimeSeriesStore:
        return TimeSeriesStore(self.ts_dir)

    @contextmanager
    def write_lock(self):
        lock = self.root / ".lock"
        try:
            handle = open(lock, "x")
        except FileExistsError:
            raise StorageError(
                f"workspace {self.root} is locked by another writer "
                f"(remove {lock} if that writer is gone)"
            ) from None
        except OSError as exc:
            raise StorageError(f"cannot lock workspace: {exc}") from None
        try:
            handle.close()
            yield
        finally:
            lock.unlink(missing_ok=True)

    def resolve(self, text: str) -> Iri:
        return self.terms.prefix_map().resolve(text)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from None


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write {out}: {exc}") from None


# -- subcommands -------------------------------------------------------------


def cmd_init(ws: Workspace, args) -> None:
    ws.root.mkdir(parents=True, exist_ok=True)
    ws.ts_dir.mkdir(parents=True, exist_ok=True)
    with ws.write_lock():
        store = TripleStore()
        added = vocab.install(store, ws.terms)
        ws.save_store(store)
    print(f"initialized workspace {ws.root} ({added} vocabulary triples)")


def cmd_ingest_nodeset(ws: Workspace, args) -> None:
    document = _read_input(args.file)
    with ws.write_lock():
        store = ws.load_store()
        nodes, machines = nodeset.parse_nodeset(document, ws.terms)
        store.insert_all(nodeset.to_triples(nodes, machines, ws.terms))
        report = vocab.materialize_alignment(store, ws.terms)
        ws.save_store(store)
    print(f"ingested {len(nodes)} nodes, {len(machines)} machines "
          f"(+{report.added} alignment triples)")


def cmd_load_processes(ws: Workspace, args) -> None:
    document = _read_input(args.file)
    with ws.write_lock():
        store = ws.load_store()
        count = process.load_ledger(store, document, ws.terms)
        vocab.materialize_alignment(store, ws.terms)
        ws.save_store(store)
    print(f"loaded {count} processes")


def cmd_ingest_log(ws: Workspace, args) -> None:
    document = _read_input(args.file)
    ws.require_initialized()
    with ws.write_lock():
        with ws.open_ts() as ts:
            report = ts.ingest_log(document)
    print(f"accepted {report.accepted} rows, rejected {len(report.errors)}")
    for line, message in report.errors:
        print(f"  line {line}: {message}", file=sys.stderr)


def cmd_simulate(ws: Workspace, args) -> None:
    if args.config is not None:
        config = simulate.config_from_json(_read_input(args.config))
    else:
        config = simulate.default_config()
    if args.seed is not None:
        config.seed = args.seed
    artifacts = simulate.generate(config, ws.terms)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "nodeset.xml").write_text(artifacts.nodeset_xml, encoding="utf-8")
        (out / "processes.jsonl").write_text(artifacts.process_ledger, encoding="utf-8")
        (out / "log.csv").write_text(artifacts.log_csv, encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"cannot write artifacts to {out}: {exc}") from None
    events = sum(len(m.events) for m in artifacts.truth.machines)
    print(f"wrote nodeset.xml, processes.jsonl, log.csv to {out} "
          f"({events} events, {len(artifacts.truth.processes)} processes)")


def cmd_query(ws: Workspace, args) -> None:
    text = _read_input(args.file)
    store = ws.load_store()
    with ws.open_ts() as ts:
        table = evaluate(store, parse_query(text), histvalues.default_registry(ts, ws.terms))
    _write_output(table.to_csv() if args.format == "csv" else table.to_json(), args.out)


def cmd_trace(ws: Workspace, args) -> None:
    store = ws.load_store()
    with ws.open_ts() as ts:
        if args.what == "machine":
            result = [traces.machine_trace(
                store, ts, ws.resolve(args.machine),
                _timestamp_arg(args.start, "--start"),
                _timestamp_arg(args.end, "--end"),
                ws.terms,
            )]
        elif args.what == "procedure":
            result = traces.traces_by_procedure(
                store, ts, ws.resolve(args.unit), ws.resolve(args.procedure), ws.terms
            )
        else:
            result = traces.traces_by_product(
                store, ts, ws.resolve(args.unit), ws.resolve(args.article), ws.terms
            )
    _write_output(traces.export_traces(result, args.format), args.out)


def _timestamp_arg(text: str, flag: str):
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise ValidationError(f"{flag}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracekg",
        description="Extract process-scoped event traces from logged variable changes.",
    )
    parser.add_argument(
        "--workspace",
        default=None,
        help=f"workspace directory (default: ${ENV_WORKSPACE} or current directory)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("init", help="create a workspace and install the vocabularies")

    p = sub.add_parser("ingest-nodeset", help="add an information-model document to the graph")
    p.add_argument("file")

    p = sub.add_parser("load-processes", help="assert a JSON-lines process ledger")
    p.add_argument("file")

    p = sub.add_parser("ingest-log", help="append a CSV value-change log")
    p.add_argument("file")

    p = sub.add_parser("simulate", help="emit nodeset/ledger/log artifacts for a scenario")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None, help="scenario config JSON file")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("query", help="run a query file ('-' for stdin)")
    p.add_argument("file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("trace", help="extract event traces")
    trace_sub = p.add_subparsers(dest="what", required=True)
    t = trace_sub.add_parser("machine", help="all events of a machine in a window")
    t.add_argument("--machine", required=True)
    t.add_argument("--start", required=True)
    t.add_argument("--end", required=True)
    for t_parser, flags in (
        (trace_sub.add_parser("procedure", help="per-process traces for a procedure"),
         ("--unit", "--procedure")),
        (trace_sub.add_parser("product", help="per-process traces for an article type"),
         ("--unit", "--article")),
    ):
        for flag in flags:
            t_parser.add_argument(flag, required=True)
    for t_parser in trace_sub.choices.values():
        t_parser.add_argument("--format", choices=("csv", "json-lines"), default="csv")
        t_parser.add_argument("--out", default=None)

    return parser


_COMMANDS = {
    "init": cmd_init,
    "ingest-nodeset": cmd_ingest_nodeset,
    "load-processes": cmd_load_processes,
    "ingest-log": cmd_ingest_log,
    "simulate": cmd_simulate,
    "query": cmd_query,
    "trace": cmd_trace,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    root = Path(args.workspace or os.environ.get(ENV_WORKSPACE) or ".")
    try:
        ws = Workspace(root)
        _COMMANDS[args.command](ws, args)
    except TraceKgError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
