"""Append-only store for timestamped variable value changes, keyed by node id.

Values are one of four kinds (boolean, integer, double, string).  Appends
go to per-series append-only segment files (when a data directory is
given) and are replayed on open; an in-memory mode (`directory=None`)
serves tests and one-shot pipelines.  Reads return closed-interval ranges
in (timestamp, append order) order, so results are stable under
re-ingestion of an exported log.

The interchange format is a CSV log with header
``time,node_id,value,value_kind`` and RFC 3339 UTC timestamps.  Export is
canonical (rows sorted by time, then append order), which makes
export -> ingest -> export byte-stable.
"""

from __future__ import annotations

import csv
import io
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Optional, Union
from urllib.parse import quote, unquote

from .errors import InvalidRangeError, ParseError, StorageError
from .rdf import Literal, _trusted_literal
from .timefmt import format_timestamp, parse_timestamp

Value = Union[bool, int, float, str]

LOG_HEADER = ("time", "node_id", "value", "value_kind")

_MAX_SEQ = 2**63


def value_kind(value: Value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "double"
    return "string"


def value_lexical(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def value_literal(value: Value) -> Literal:
    # value_lexical output is canonical for its kind, so skip re-validation
    return _trusted_literal(value_lexical(value), value_kind(value))


def parse_value(lexical: str, kind: str) -> Value:
    if kind == "boolean":
        if lexical not in ("true", "false"):
            raise ValueError(f"bad boolean value: {lexical!r}")
        return lexical == "true"
    if kind == "integer":
        return int(lexical)
    if kind == "double":
        return float(lexical)
    if kind == "string":
        return lexical
    raise ValueError(f"unknown value kind: {kind!r}")


@dataclass(frozen=True)
class ValueChange:
    timestamp: datetime
    node_id: str
    value: Value

    def __post_init__(self):
        if not self.node_id:
            raise ValueError("node_id must be non-empty")


@dataclass(frozen=True)
class Record:
    """A value change plus its position in global append order."""

    seq: int
    change: ValueChange


@dataclass
class IngestReport:
    accepted: int
    errors: list[tuple[int, str]]


class _Series:
    __slots__ = ("entries", "sorted")

    def __init__(self):
        self.entries: list[tuple[datetime, int, Value]] = []
        self.sorted = True

    def append(self, timestamp: datetime, seq: int, value: Value) -> None:
        if self.entries and timestamp < self.entries[-1][0]:
            self.sorted = False
        self.entries.append((timestamp, seq, value))

    def ordered(self) -> list[tuple[datetime, int, Value]]:
        if not self.sorted:
            self.entries.sort(key=lambda e: (e[0], e[1]))
            self.sorted = True
        return self.entries


class TimeSeriesStore:
    """Many independent series, one per node id, under a single append lock."""

    SEGMENT_RECORDS = 50_000

    def __init__(self, directory: Optional[Union[str, Path]] = None):
        self._dir = Path(directory) if directory is not None else None
        self._series: dict[str, _Series] = {}
        self._next_seq = 0
        self._lock = threading.Lock()
        self._defer_flush = False  # set during bulk ingest; flushed once at the end
        self._segments: dict[str, tuple[object, int, int]] = {}  # node_id -> (handle, seg_index, rows)
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._replay()

    # -- write path ------------------------------------------------------

    def append(self, change: ValueChange) -> int:
        """Record one change; returns its global sequence number."""
        with self._lock:
            return self._append_locked(change)

    def _append_locked(self, change: ValueChange) -> int:
        seq = self._next_seq
        self._next_seq += 1
        self._series.setdefault(change.node_id, _Series()).append(
            change.timestamp, seq, change.value
        )
        if self._dir is not None:
            self._write_segment_row(change, seq)
        return seq

    def ingest_log(self, document: str) -> IngestReport:
        """Bulk-append a CSV log; bad rows are reported by line, good rows kept."""
        reader = csv.reader(io.StringIO(document))
        try:
            header = next(reader)
        except StopIteration:
            return IngestReport(0, [])
        if tuple(header) != LOG_HEADER:
            raise ParseError(f"bad log header: expected {','.join(LOG_HEADER)}", line=1)
        accepted, errors = 0, []
        with self._lock:
            self._defer_flush = True
            try:
                for row in reader:
                    if not row:
                        continue
                    try:
                        self._append_locked(_row_to_change(row))
                        accepted += 1
                    except ValueError as exc:
                        errors.append((reader.line_num, str(exc)))
            finally:
                self._defer_flush = False
                self._flush_segments()
        return IngestReport(accepted, errors)

    # -- read path -------------------------------------------------------

    def range_records(self, node_id: str, start: datetime, end: datetime) -> list[Record]:
        """Records with start <= t <= end, ascending by (timestamp, append order)."""
        if start > end:
            raise InvalidRangeError(
                f"range start {format_timestamp(start)} is after end {format_timestamp(end)}"
            )
        return self._slice(node_id, (start, -1), (end, _MAX_SEQ))

    def range_query(self, node_id: str, start: datetime, end: datetime) -> list[ValueChange]:
        return [r.change for r in self.range_records(node_id, start, end)]

    def range_after(self, node_id: str, start: datetime, end: datetime) -> list[ValueChange]:
        """Half-open variant: start < t <= end.  Lets callers tile adjacent windows."""
        if start > end:
            raise InvalidRangeError("range start is after end")
        return [r.change for r in self._slice(node_id, (start, _MAX_SEQ), (end, _MAX_SEQ))]

    def _slice(self, node_id: str, lo: tuple, hi: tuple) -> list[Record]:
        with self._lock:
            series = self._series.get(node_id)
            if series is None:
                return []
            entries = list(series.ordered())
        keys = [(t, seq) for t, seq, _ in entries]
        i, j = bisect_left(keys, lo), bisect_right(keys, hi)
        return [
            Record(seq, ValueChange(t, node_id, value)) for t, seq, value in entries[i:j]
        ]

    def node_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._series)

    def count(self, node_id: Optional[str] = None) -> int:
        with self._lock:
            if node_id is not None:
                series = self._series.get(node_id)
                return len(series.entries) if series else 0
            return sum(len(s.entries) for s in self._series.values())

    def export_log(self) -> str:
        """Full log as canonical CSV: header, then rows by (time, append order)."""
        with self._lock:
            rows = [
                (t, seq, node_id, value)
                for node_id, series in self._series.items()
                for t, seq, value in series.entries
            ]
        rows.sort(key=lambda r: (r[0], r[1]))
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(LOG_HEADER)
        for t, _, node_id, value in rows:
            writer.writerow([format_timestamp(t), node_id, value_lexical(value), value_kind(value)])
        return out.getvalue()

    # -- persistence -----------------------------------------------------

    def close(self) -> None:
        with self._lock:
            for handle, _, _ in self._segments.values():
                handle.close()  # type: ignore[attr-defined]
            self._segments.clear()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _segment_path(self, node_id: str, index: int) -> Path:
        assert self._dir is not None
        return self._dir / f"{quote(node_id, safe='')}.{index:05d}.seg"

    def _write_segment_row(self, change: ValueChange, seq: int) -> None:
        entry = self._segments.get(change.node_id)
        if entry is None or entry[2] >= self.SEGMENT_RECORDS:
            if entry is not None:
                entry[0].close()  # type: ignore[attr-defined]
            index = entry[1] + 1 if entry is not None else self._next_segment_index(change.node_id)
            handle = open(self._segment_path(change.node_id, index), "a", encoding="utf-8", newline="")
            entry = (handle, index, 0)
        handle, index, rows = entry
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [seq, format_timestamp(change.timestamp), value_lexical(change.value), value_kind(change.value)]
        )
        if not self._defer_flush:
            handle.flush()
        self._segments[change.node_id] = (handle, index, rows + 1)

    def _flush_segments(self) -> None:
        for handle, _, _ in self._segments.values():
            handle.flush()  # type: ignore[attr-defined]

    def _next_segment_index(self, node_id: str) -> int:
        prefix = quote(node_id, safe="") + "."
        existing = [
            int(p.name[len(prefix):-4])
            for p in self._dir.glob(f"{prefix}*.seg")  # type: ignore[union-attr]
        ]
        return max(existing) + 1 if existing else 0

    def _replay(self) -> None:
        assert self._dir is not None
        max_seq = -1
        for path in sorted(self._dir.glob("*.seg")):
            encoded, _, _ = path.name[:-4].rpartition(".")
            node_id = unquote(encoded)
            series = self._series.setdefault(node_id, _Series())
            with open(path, encoding="utf-8", newline="") as handle:
                for row in csv.reader(handle):
                    try:
                        seq = int(row[0])
                        series.append(parse_timestamp(row[1]), seq, parse_value(row[2], row[3]))
                    except (ValueError, IndexError) as exc:
                        raise StorageError(f"corrupt segment {path.name}: {exc}") from None
                    max_seq = max(max_seq, seq)
        self._next_seq = max_seq + 1


def _row_to_change(row: list[str]) -> ValueChange:
    if len(row) != 4:
        raise ValueError(f"expected 4 columns, got {len(row)}")
    time_text, node_id, lexical, kind = row
    if not node_id:
        raise ValueError("empty node_id")
    return ValueChange(parse_timestamp(time_text), node_id, parse_value(lexical, kind))
