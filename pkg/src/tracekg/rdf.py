"""Graph substrate: terms, triples, prefix handling and an indexed in-memory store.

The store speaks a deliberately small line-oriented serialization
("line-triples"): UTF-8 text, one ``@prefix label: <iri>`` directive per
line, then one statement per line terminated by `` .``.  Terms are written
as ``<absolute-iri>``, ``label:local``, or ``"lexical"^^datatype`` where
datatype is one of ``string boolean integer double dateTime``.  Export is
canonical (statements sorted by subject, predicate, object; ``\\n`` line
endings), so two exports of equal stores are byte-identical.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .errors import ParseError
from .timefmt import is_timestamp

DATATYPES = ("string", "boolean", "integer", "double", "dateTime")

_INTEGER_RE = re.compile(r"^[+-]?\d+$")
_LABEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
# Dots only in the interior, so a prefixed name never swallows a statement dot.
_LOCAL_RE = re.compile(r"^[A-Za-z0-9_%-]+(?:\.[A-Za-z0-9_%-]+)*$")


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or any(c.isspace() for c in self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = "string"

    def __post_init__(self):
        if self.datatype not in DATATYPES:
            raise ValueError(f"unknown literal datatype: {self.datatype!r}")
        if self.datatype == "boolean" and self.lexical not in ("true", "false"):
            raise ValueError(f"boolean literal must be 'true' or 'false', got {self.lexical!r}")
        if self.datatype == "integer" and not _INTEGER_RE.match(self.lexical):
            raise ValueError(f"bad integer literal: {self.lexical!r}")
        if self.datatype == "double":
            try:
                float(self.lexical)
            except ValueError:
                raise ValueError(f"bad double literal: {self.lexical!r}") from None
        if self.datatype == "dateTime" and not is_timestamp(self.lexical):
            raise ValueError(f"bad dateTime literal: {self.lexical!r}")

    def __repr__(self) -> str:
        return f'"{self.lexical}"^^{self.datatype}'


def _trusted_literal(lexical: str, datatype: str) -> Literal:
    """Build a Literal without re-validating; for values this package just
    serialized canonically itself (hot paths only)."""
    literal = object.__new__(Literal)
    object.__setattr__(literal, "lexical", lexical)
    object.__setattr__(literal, "datatype", datatype)
    return literal


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def sort_key(self) -> tuple:
        return (self.subject.value, self.predicate.value, _term_key(self.object))


def _term_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return (0, term.value, "")
    return (1, term.datatype, term.lexical)


class PrefixMap:
    """Bidirectional prefix-label <-> namespace bindings with deterministic expansion."""

    def __init__(self, bindings: Optional[dict[str, str]] = None):
        self._bindings: dict[str, str] = {}
        for label, ns in (bindings or {}).items():
            self.bind(label, ns)

    def bind(self, label: str, namespace: str) -> None:
        if not _LABEL_RE.match(label):
            raise ValueError(f"invalid prefix label: {label!r}")
        existing = self._bindings.get(label)
        if existing is not None and existing != namespace:
            raise ValueError(f"prefix {label!r} already bound to {existing!r}")
        self._bindings[label] = namespace

    def bindings(self) -> dict[str, str]:
        return dict(self._bindings)

    def expand(self, label: str, local: str) -> Iri:
        if label not in self._bindings:
            raise KeyError(f"unknown prefix: {label!r}")
        return Iri(self._bindings[label] + local)

    def resolve(self, text: str) -> Iri:
        """Expand ``label:local`` when the label is bound, otherwise treat as absolute."""
        head, sep, tail = text.partition(":")
        if sep and head in self._bindings and _LOCAL_RE.match(tail or ""):
            return self.expand(head, tail)
        return Iri(text)

    def compact(self, iri: Iri) -> Optional[str]:
        """Best (longest-namespace, then smallest-label) ``label:local`` form, or None."""
        best: Optional[tuple[int, str, str]] = None
        for label, ns in self._bindings.items():
            if iri.value.startswith(ns):
                local = iri.value[len(ns):]
                if _LOCAL_RE.match(local):
                    candidate = (-len(ns), label, local)
                    if best is None or candidate < best:
                        best = candidate
        if best is None:
            return None
        return f"{best[1]}:{best[2]}"

    def copy(self) -> "PrefixMap":
        return PrefixMap(self._bindings)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrefixMap) and self._bindings == other._bindings

    def __contains__(self, label: str) -> bool:
        return label in self._bindings


class TripleStore:
    """Set-semantics triple store with subject/predicate/object indexes.

    Mutations are serialized behind a lock (single writer); `match` reads a
    snapshot and may run concurrently.  Results of `match` come back in
    canonical (subject, predicate, object) order, which makes every consumer
    deterministic regardless of insertion order.
    """

    def __init__(self, prefixes: Optional[PrefixMap] = None):
        self.prefixes = prefixes.copy() if prefixes else PrefixMap()
        self._triples: dict[Triple, None] = {}
        self._by_subject: dict[Iri, dict[Triple, None]] = {}
        self._by_predicate: dict[Iri, dict[Triple, None]] = {}
        self._by_object: dict[Term, dict[Triple, None]] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(list(self._triples))

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TripleStore)
            and self._triples.keys() == other._triples.keys()
            and self.prefixes == other.prefixes
        )

    def insert(self, triple: Triple) -> bool:
        """Add one triple; a re-insert is a no-op. Returns True when new."""
        with self._lock:
            if triple in self._triples:
                return False
            self._triples[triple] = None
            self._by_subject.setdefault(triple.subject, {})[triple] = None
            self._by_predicate.setdefault(triple.predicate, {})[triple] = None
            self._by_object.setdefault(triple.object, {})[triple] = None
            return True

    def insert_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def match(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the bound positions, canonically ordered."""
        with self._lock:
            candidates = self._smallest_index(subject, predicate, object)
        out = [
            t
            for t in candidates
            if (subject is None or t.subject == subject)
            and (predicate is None or t.predicate == predicate)
            and (object is None or t.object == object)
        ]
        out.sort(key=Triple.sort_key)
        return out

    def _smallest_index(self, s, p, o) -> list[Triple]:
        pools = []
        if s is not None:
            pools.append(self._by_subject.get(s, {}))
        if p is not None:
            pools.append(self._by_predicate.get(p, {}))
        if o is not None:
            pools.append(self._by_object.get(o, {}))
        if not pools:
            return list(self._triples)
        return list(min(pools, key=len))

    def subjects(self, predicate: Iri, object: Term) -> list[Iri]:
        return [t.subject for t in self.match(None, predicate, object)]

    def objects(self, subject: Iri, predicate: Iri) -> list[Term]:
        return [t.object for t in self.match(subject, predicate, None)]

    # -- serialization ---------------------------------------------------

    def load(self, document: str) -> int:
        """Parse a line-triples document into the store. Returns statements inserted."""
        inserted = 0
        with self._lock:
            for lineno, raw in enumerate(document.split("\n"), start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("@prefix"):
                    self._load_prefix(line, lineno)
                    continue
                inserted += self.insert(self._parse_statement(line, lineno))
        return inserted

    def export(self) -> str:
        """Canonical serialization: prefix header, then sorted statements."""
        lines = [
            f"@prefix {label}: <{ns}>"
            for label, ns in sorted(self.prefixes.bindings().items())
        ]
        for triple in sorted(self._triples, key=Triple.sort_key):
            s = self._format_iri(triple.subject)
            p = self._format_iri(triple.predicate)
            o = self._format_term(triple.object)
            lines.append(f"{s} {p} {o} .")
        return "".join(line + "\n" for line in lines)

    def _load_prefix(self, line: str, lineno: int) -> None:
        m = re.match(r"^@prefix\s+([A-Za-z][A-Za-z0-9_]*):\s+<([^<>\s]+)>$", line)
        if m is None:
            raise ParseError(f"malformed @prefix directive: {line!r}", line=lineno)
        try:
            self.prefixes.bind(m.group(1), m.group(2))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None

    def _parse_statement(self, line: str, lineno: int) -> Triple:
        if not line.endswith("."):
            raise ParseError("statement must end with '.'", line=lineno)
        body = line[:-1].rstrip()
        terms, pos = [], 0
        while pos < len(body):
            if body[pos].isspace():
                pos += 1
                continue
            term, pos = self._parse_term(body, pos, lineno)
            terms.append(term)
        if len(terms) != 3:
            raise ParseError(f"expected 3 terms per statement, got {len(terms)}", line=lineno)
        s, p, o = terms
        if not isinstance(s, Iri) or not isinstance(p, Iri):
            raise ParseError("subject and predicate must be IRIs", line=lineno)
        return Triple(s, p, o)

    def _parse_term(self, text: str, pos: int, lineno: int) -> tuple[Term, int]:
        c = text[pos]
        if c == "<":
            end = text.find(">", pos)
            if end < 0:
                raise ParseError("unterminated IRI", line=lineno, column=pos + 1)
            try:
                return Iri(text[pos + 1:end]), end + 1
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, column=pos + 1) from None
        if c == '"':
            chars, i = [], pos + 1
            while i < len(text) and text[i] != '"':
                if text[i] == "\\":
                    if i + 1 >= len(text):
                        raise ParseError("dangling escape", line=lineno, column=i + 1)
                    chars.append(_UNESCAPE.get(text[i + 1], text[i + 1]))
                    i += 2
                else:
                    chars.append(text[i])
                    i += 1
            if i >= len(text):
                raise ParseError("unterminated literal", line=lineno, column=pos + 1)
            i += 1  # closing quote
            if not text.startswith("^^", i):
                raise ParseError("literal requires ^^datatype", line=lineno, column=i + 1)
            i += 2
            start = i
            while i < len(text) and not text[i].isspace():
                i += 1
            try:
                return Literal("".join(chars), text[start:i]), i
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, column=start + 1) from None
        m = re.match(r"([A-Za-z][A-Za-z0-9_]*):([A-Za-z0-9_%-]+(?:\.[A-Za-z0-9_%-]+)*)", text[pos:])
        if m is None:
            raise ParseError(f"cannot parse term at: {text[pos:pos+20]!r}", line=lineno, column=pos + 1)
        try:
            return self.prefixes.expand(m.group(1), m.group(2)), pos + m.end()
        except KeyError as exc:
            raise ParseError(str(exc.args[0]), line=lineno, column=pos + 1) from None

    def _format_iri(self, iri: Iri) -> str:
        compacted = self.prefixes.compact(iri)
        return compacted if compacted is not None else f"<{iri.value}>"

    def _format_term(self, term: Term) -> str:
        if isinstance(term, Iri):
            return self._format_iri(term)
        escaped = "".join(_ESCAPE.get(c, c) for c in term.lexical)
        return f'"{escaped}"^^{term.datatype}'


_ESCAPE = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPE = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


def load_document(document: str) -> TripleStore:
    store = TripleStore()
    store.load(document)
    return store
