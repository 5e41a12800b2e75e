"""Graph-pattern query language: parser, printer, and evaluator.

The language is the conjunctive subset needed to interrogate the plant
graph, extended with two path forms and property-function calls:

    query        = { prefix_decl } select_clause where_clause [ order_clause ]
    prefix_decl  = "PREFIX" LABEL ":" IRIREF
    select_clause= "SELECT" VAR { VAR }
    where_clause = "WHERE" "{" { pattern [ "." ] } "}"
    pattern      = filter | subject pred_obj { ";" pred_obj }
    pred_obj     = predicate object
    predicate    = "a" | iri "*" | iri "/" iri | iri
    object       = VAR | iri | literal | "(" { VAR | iri | literal } ")"
    filter       = "FILTER" "(" VAR "=" value { "||" VAR "=" value } ")"
    order_clause = "ORDER" "BY" "ASC" "(" VAR ")"
    iri          = "<" absolute ">" | LABEL ":" LOCAL
    literal      = STRING [ "^^" datatype ]

Keywords are case-insensitive; variable names are case-sensitive.  A
parenthesized object turns the pattern into a property-function call
dispatched through a `FunctionRegistry`.  Bare string literals have
datatype ``string``.

Evaluation is a left-to-right join over the store with index-backed
lookups.  Filters run as soon as all their variables are bound; ORDER BY
is a stable sort applied last.  Everything is deterministic for a fixed
store state.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import EvaluationError, ParseError, UnregisteredFunctionError, ValidationError
from .rdf import DATATYPES, Iri, Literal, PrefixMap, Term, TripleStore

# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


TermOrVar = Union[Iri, Literal, Var]


@dataclass(frozen=True)
class TriplePattern:
    subject: TermOrVar
    predicate: Iri
    object: TermOrVar


@dataclass(frozen=True)
class ZeroOrMorePath:
    predicate: Iri


@dataclass(frozen=True)
class SequencePath:
    first: Iri
    second: Iri


@dataclass(frozen=True)
class PathPattern:
    subject: TermOrVar
    path: Union[ZeroOrMorePath, SequencePath]
    object: TermOrVar


@dataclass(frozen=True)
class FilterPattern:
    # Disjunction of (variable, constant) equality tests.
    disjuncts: tuple[tuple[Var, Term], ...]


@dataclass(frozen=True)
class FunctionCall:
    subject: TermOrVar
    function: Iri
    args: tuple[TermOrVar, ...]


Pattern = Union[TriplePattern, PathPattern, FilterPattern, FunctionCall]


@dataclass(frozen=True)
class Query:
    select: tuple[Var, ...]
    patterns: tuple[Pattern, ...]
    order_by: Optional[tuple[Var, str]] = None  # (variable, "asc")
    prefixes: tuple[tuple[str, str], ...] = ()


def binding_vars(pattern: Pattern) -> set[str]:
    """Variables a pattern can bind (filter variables never bind)."""
    if isinstance(pattern, FilterPattern):
        return set()
    found = set()
    if isinstance(pattern, (TriplePattern, PathPattern)):
        positions = (pattern.subject, pattern.object)
    else:
        positions = (pattern.subject, *pattern.args)
    for item in positions:
        if isinstance(item, Var):
            found.add(item.name)
    return found


# -- tokenizer ---------------------------------------------------------------

_KEYWORDS = {"PREFIX", "SELECT", "WHERE", "FILTER", "ORDER", "BY", "ASC", "DESC"}
_PNAME_RE = re.compile(
    r"([A-Za-z][A-Za-z0-9_]*):([A-Za-z0-9_%-]+(?:\.[A-Za-z0-9_%-]+)*)"
)
_PNAME_NS_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*):")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_VARNAME_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class _Token:
    type: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    i, n = 0, len(text)

    def err(message: str, pos: int):
        raise ParseError(message, line=line, column=pos - line_start + 1)

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            line_start = i + 1
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        col = i - line_start + 1
        if c in "{}()*/;.=":
            tokens.append(_Token(c, c, line, col))
            i += 1
            continue
        if c == "|":
            if text.startswith("||", i):
                tokens.append(_Token("||", "||", line, col))
                i += 2
                continue
            err("single '|' (expected '||')", i)
        if c == "?":
            m = _VARNAME_RE.match(text, i + 1)
            if m is None:
                err("'?' must start a variable name", i)
            tokens.append(_Token("VAR", m.group(0), line, col))
            i = m.end()
            continue
        if c == "<":
            end = text.find(">", i)
            if end < 0 or "\n" in text[i:end]:
                err("unterminated IRI", i)
            tokens.append(_Token("IRIREF", text[i + 1:end], line, col))
            i = end + 1
            continue
        if c == '"':
            lexical, i = _scan_string(text, i, err)
            datatype = "string"
            if text.startswith("^^", i):
                i += 2
                m = _WORD_RE.match(text, i)
                if m is None or m.group(0) not in DATATYPES:
                    err(f"expected a datatype keyword ({', '.join(DATATYPES)})", i)
                datatype = m.group(0)
                i = m.end()
            tokens.append(_Token("LITERAL", json.dumps([lexical, datatype]), line, col))
            continue
        m = _PNAME_RE.match(text, i)
        if m is not None:
            tokens.append(_Token("PNAME", m.group(0), line, col))
            i = m.end()
            continue
        m = _PNAME_NS_RE.match(text, i)
        if m is not None:
            tokens.append(_Token("PNAME_NS", m.group(1), line, col))
            i = m.end()
            continue
        m = _WORD_RE.match(text, i)
        if m is not None:
            word = m.group(0)
            if word.upper() in _KEYWORDS:
                tokens.append(_Token(word.upper(), word, line, col))
            elif word == "a":
                tokens.append(_Token("A", word, line, col))
            else:
                err(f"unexpected word {word!r}", i)
            i = m.end()
            continue
        err(f"unexpected character {c!r}", i)
    tokens.append(_Token("EOF", "", line, n - line_start + 1))
    return tokens


def _scan_string(text: str, i: int, err) -> tuple[str, int]:
    chars = []
    j = i + 1
    unescape = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}
    while j < len(text):
        c = text[j]
        if c == "\\":
            if j + 1 >= len(text):
                err("dangling escape in string", j)
            chars.append(unescape.get(text[j + 1], text[j + 1]))
            j += 2
            continue
        if c == '"':
            return "".join(chars), j + 1
        if c == "\n":
            err("newline inside string literal", j)
        chars.append(c)
        j += 1
    err("unterminated string literal", i)
    raise AssertionError  # err always raises


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes = PrefixMap()
        self.rdf_type: Optional[Iri] = None

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, *types: str) -> _Token:
        token = self.tokens[self.pos]
        if token.type not in types:
            raise ParseError(
                f"expected {' or '.join(types)}, found {token.type} {token.value!r}",
                line=token.line,
                column=token.column,
            )
        self.pos += 1
        return token

    def accept(self, type_: str) -> Optional[_Token]:
        if self.tokens[self.pos].type == type_:
            self.pos += 1
            return self.tokens[self.pos - 1]
        return None

    def parse(self) -> Query:
        while self.accept("PREFIX"):
            label = self.take("PNAME_NS")
            iriref = self.take("IRIREF")
            try:
                self.prefixes.bind(label.value, iriref.value)
            except ValueError as exc:
                raise ParseError(str(exc), line=label.line, column=label.column) from None
        if "rdf" in self.prefixes:
            self.rdf_type = self.prefixes.expand("rdf", "type")

        self.take("SELECT")
        select = []
        while (token := self.accept("VAR")) is not None:
            select.append(Var(token.value))
        if not select:
            token = self.peek()
            raise ParseError("SELECT requires at least one variable",
                             line=token.line, column=token.column)

        self.take("WHERE")
        self.take("{")
        patterns: list[Pattern] = []
        while not self.accept("}"):
            patterns.extend(self._pattern())
            if not self.accept("."):
                self.take("}")
                break

        order_by = None
        if self.accept("ORDER"):
            self.take("BY")
            token = self.take("ASC", "DESC")
            if token.type == "DESC":
                raise ParseError("DESC ordering is not supported",
                                 line=token.line, column=token.column)
            self.take("(")
            order_by = (Var(self.take("VAR").value), "asc")
            self.take(")")
        self.take("EOF")

        query = Query(
            select=tuple(select),
            patterns=tuple(patterns),
            order_by=order_by,
            prefixes=tuple(sorted(self.prefixes.bindings().items())),
        )
        self._check_vars(query)
        return query

    def _check_vars(self, query: Query) -> None:
        bound = set()
        for pattern in query.patterns:
            bound |= binding_vars(pattern)
        required = list(query.select) + ([query.order_by[0]] if query.order_by else [])
        for var in required:
            if var.name not in bound:
                raise ParseError(f"variable ?{var.name} does not appear in any pattern")

    def _pattern(self) -> list[Pattern]:
        if self.accept("FILTER"):
            return [self._filter()]
        subject = self._term(allow_literal=False)
        out: list[Pattern] = []
        while True:
            out.append(self._predicate_object(subject))
            if not self.accept(";"):
                return out

    def _filter(self) -> FilterPattern:
        self.take("(")
        disjuncts = [self._equality()]
        while self.accept("||"):
            disjuncts.append(self._equality())
        self.take(")")
        return FilterPattern(tuple(disjuncts))

    def _equality(self) -> tuple[Var, Term]:
        var = Var(self.take("VAR").value)
        self.take("=")
        token = self.peek()
        value = self._term(allow_literal=True)
        if isinstance(value, Var):
            raise ParseError("filter compares a variable to a constant",
                             line=token.line, column=token.column)
        return (var, value)

    def _predicate_object(self, subject: TermOrVar) -> Pattern:
        token = self.peek()
        if self.accept("A"):
            if self.rdf_type is None:
                raise ParseError("'a' requires the rdf prefix to be declared",
                                 line=token.line, column=token.column)
            predicate: Iri = self.rdf_type
            star = seq = None
        else:
            predicate = self._iri()
            star = self.accept("*")
            seq = None if star else self.accept("/")
        if seq is not None:
            second = self._iri()
            path: Union[ZeroOrMorePath, SequencePath] = SequencePath(predicate, second)
            return PathPattern(subject, path, self._term(allow_literal=True))
        if star is not None:
            if self.peek().type == "/":
                token = self.peek()
                raise ParseError("a path may use '*' or '/' but not both",
                                 line=token.line, column=token.column)
            return PathPattern(subject, ZeroOrMorePath(predicate), self._term(allow_literal=True))
        if self.accept("("):
            args = []
            while not self.accept(")"):
                args.append(self._term(allow_literal=True))
            return FunctionCall(subject, predicate, tuple(args))
        return TriplePattern(subject, predicate, self._term(allow_literal=True))

    def _iri(self) -> Iri:
        token = self.take("IRIREF", "PNAME")
        return self._to_iri(token)

    def _to_iri(self, token: _Token) -> Iri:
        if token.type == "IRIREF":
            try:
                return Iri(token.value)
            except ValueError as exc:
                raise ParseError(str(exc), line=token.line, column=token.column) from None
        label, _, local = token.value.partition(":")
        try:
            return self.prefixes.expand(label, local)
        except KeyError:
            raise ParseError(f"unknown prefix: {label!r}",
                             line=token.line, column=token.column) from None

    def _term(self, allow_literal: bool) -> TermOrVar:
        token = self.peek()
        if token.type == "VAR":
            self.pos += 1
            return Var(token.value)
        if token.type in ("IRIREF", "PNAME"):
            self.pos += 1
            return self._to_iri(token)
        if token.type == "LITERAL" and allow_literal:
            self.pos += 1
            lexical, datatype = json.loads(token.value)
            try:
                return Literal(lexical, datatype)
            except ValueError as exc:
                raise ParseError(str(exc), line=token.line, column=token.column) from None
        raise ParseError(f"unexpected {token.type} {token.value!r}",
                         line=token.line, column=token.column)


def parse_query(text: str) -> Query:
    """Parse query text; unknown syntax is rejected, never ignored."""
    return _Parser(_tokenize(text)).parse()


# -- printer -----------------------------------------------------------------


def format_query(query: Query) -> str:
    """Canonical text form; parse(format_query(parse(text))) == parse(text)."""
    prefixes = PrefixMap(dict(query.prefixes))
    lines = [f"PREFIX {label}: <{ns}>" for label, ns in query.prefixes]
    lines.append("SELECT " + " ".join(f"?{v.name}" for v in query.select))
    lines.append("WHERE {")
    for pattern in query.patterns:
        lines.append(f"  {_format_pattern(pattern, prefixes)} .")
    lines.append("}")
    if query.order_by is not None:
        lines.append(f"ORDER BY ASC(?{query.order_by[0].name})")
    return "".join(line + "\n" for line in lines)


def _format_pattern(pattern: Pattern, prefixes: PrefixMap) -> str:
    t = lambda item: _format_term(item, prefixes)
    if isinstance(pattern, TriplePattern):
        return f"{t(pattern.subject)} {t(pattern.predicate)} {t(pattern.object)}"
    if isinstance(pattern, PathPattern):
        if isinstance(pattern.path, ZeroOrMorePath):
            middle = f"{t(pattern.path.predicate)}*"
        else:
            middle = f"{t(pattern.path.first)} / {t(pattern.path.second)}"
        return f"{t(pattern.subject)} {middle} {t(pattern.object)}"
    if isinstance(pattern, FunctionCall):
        args = " ".join(t(a) for a in pattern.args)
        return f"{t(pattern.subject)} {t(pattern.function)} ( {args} )"
    tests = " || ".join(f"?{v.name} = {t(value)}" for v, value in pattern.disjuncts)
    return f"FILTER ( {tests} )"


def _format_term(item: TermOrVar, prefixes: PrefixMap) -> str:
    if isinstance(item, Var):
        return f"?{item.name}"
    if isinstance(item, Iri):
        compacted = prefixes.compact(item)
        return compacted if compacted is not None else f"<{item.value}>"
    escape = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
    body = "".join(escape.get(c, c) for c in item.lexical)
    suffix = "" if item.datatype == "string" else f"^^{item.datatype}"
    return f'"{body}"{suffix}'


# -- evaluator ---------------------------------------------------------------

Binding = dict[str, Term]
PropertyFunction = Callable[[TripleStore, Term, tuple[TermOrVar, ...]], list[Binding]]


class FunctionRegistry:
    """Property functions keyed by the IRI that triggers them in a query."""

    def __init__(self):
        self._functions: dict[Iri, PropertyFunction] = {}

    def register(self, iri: Iri, function: PropertyFunction) -> None:
        if iri in self._functions:
            raise ValidationError(f"property function already registered: {iri.value}")
        self._functions[iri] = function

    def get(self, iri: Iri) -> PropertyFunction:
        try:
            return self._functions[iri]
        except KeyError:
            raise UnregisteredFunctionError(
                f"no property function registered for {iri.value}"
            ) from None

    def __contains__(self, iri: Iri) -> bool:
        return iri in self._functions


@dataclass
class ResultTable:
    columns: tuple[str, ...]
    rows: list[tuple[Term, ...]]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell_text(term) for term in row])
        return out.getvalue()

    def to_json(self) -> str:
        objects = []
        for row in self.rows:
            entry = {}
            for column, term in zip(self.columns, row):
                if isinstance(term, Iri):
                    entry[column] = {"kind": "iri", "value": term.value}
                else:
                    entry[column] = {"kind": "literal", "value": term.lexical,
                                     "datatype": term.datatype}
            objects.append(entry)
        return json.dumps(objects, indent=2, ensure_ascii=False) + "\n"


def _cell_text(term: Term) -> str:
    return term.value if isinstance(term, Iri) else term.lexical


def evaluate(store: TripleStore, query: Query, registry: Optional[FunctionRegistry] = None) -> ResultTable:
    """Run a query over a store snapshot.

    Patterns join left to right; each filter fires as soon as every variable
    it mentions is bound; property-function calls expand each row by the
    function's bindings; ORDER BY is a stable sort at the end.
    """
    registry = registry or FunctionRegistry()
    for pattern in query.patterns:
        if isinstance(pattern, FunctionCall):
            registry.get(pattern.function)  # raises when unregistered

    solutions: list[Binding] = [{}]
    bound: set[str] = set()
    pending: list[FilterPattern] = []
    for pattern in query.patterns:
        if isinstance(pattern, FilterPattern):
            pending.append(pattern)
        elif isinstance(pattern, TriplePattern):
            solutions = _apply_triple(store, solutions, pattern)
        elif isinstance(pattern, PathPattern):
            solutions = _apply_path(store, solutions, pattern)
        else:
            solutions = _apply_function(store, solutions, pattern, registry)
        bound |= binding_vars(pattern)
        solutions, pending = _flush_filters(solutions, pending, bound)
    for filter_pattern in pending:
        missing = {v.name for v, _ in filter_pattern.disjuncts} - bound
        if missing:
            raise EvaluationError(
                "filter variable never bound: " + ", ".join(f"?{m}" for m in sorted(missing))
            )
        solutions = _apply_filter(solutions, filter_pattern)

    rows = []
    for solution in solutions:
        try:
            rows.append(tuple(solution[v.name] for v in query.select))
        except KeyError as exc:
            raise EvaluationError(f"selected variable ?{exc.args[0]} unbound in a result row") from None
    if query.order_by is not None:
        var = query.order_by[0]
        keys = [_order_key(solution[var.name]) for solution in solutions]
        rows = [row for _, row in sorted(zip(keys, rows), key=lambda pair: pair[0])]
    return ResultTable(tuple(v.name for v in query.select), rows)


def _flush_filters(solutions, pending, bound):
    remaining = []
    for filter_pattern in pending:
        if {v.name for v, _ in filter_pattern.disjuncts} <= bound:
            solutions = _apply_filter(solutions, filter_pattern)
        else:
            remaining.append(filter_pattern)
    return solutions, remaining


def _substitute(item: TermOrVar, row: Binding) -> TermOrVar:
    if isinstance(item, Var):
        return row.get(item.name, item)
    return item


def _extend(row: Binding, slot: TermOrVar, value: Term) -> Optional[Binding]:
    """Bind `slot` to `value` on a copy of `row`; None on conflict."""
    if isinstance(slot, Var):
        existing = row.get(slot.name)
        if existing is not None:
            return row if existing == value else None
        new = dict(row)
        new[slot.name] = value
        return new
    return row if slot == value else None


def _apply_triple(store: TripleStore, solutions: list[Binding], pattern: TriplePattern) -> list[Binding]:
    out = []
    for row in solutions:
        s = _substitute(pattern.subject, row)
        o = _substitute(pattern.object, row)
        if isinstance(s, Literal):
            continue  # subjects are IRIs; a literal subject can never match
        for triple in store.match(
            s if isinstance(s, Iri) else None,
            pattern.predicate,
            o if not isinstance(o, Var) else None,
        ):
            extended = _extend(row, s, triple.subject)
            if extended is not None:
                extended = _extend(extended, o, triple.object)
            if extended is not None:
                out.append(extended if extended is not row else dict(row))
    return out


def eval_zero_or_more(store: TripleStore, start: Iri, predicate: Iri) -> set[Iri]:
    """Reflexive-transitive closure over one predicate, cycle-safe.

    Only IRI objects are traversed or reported; the start node is always a
    member (zero steps).
    """
    visited = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for triple in store.match(node, predicate, None):
            target = triple.object
            if isinstance(target, Iri) and target not in visited:
                visited.add(target)
                frontier.append(target)
    return visited


def _reverse_zero_or_more(store: TripleStore, end: Iri, predicate: Iri) -> set[Iri]:
    visited = {end}
    frontier = [end]
    while frontier:
        node = frontier.pop()
        for triple in store.match(None, predicate, node):
            if triple.subject not in visited:
                visited.add(triple.subject)
                frontier.append(triple.subject)
    return visited


def _apply_path(store: TripleStore, solutions: list[Binding], pattern: PathPattern) -> list[Binding]:
    if isinstance(pattern.path, SequencePath):
        return _apply_sequence(store, solutions, pattern)
    predicate = pattern.path.predicate
    out = []
    for row in solutions:
        s = _substitute(pattern.subject, row)
        o = _substitute(pattern.object, row)
        if isinstance(s, Literal):
            continue
        if isinstance(s, Iri):
            closure = eval_zero_or_more(store, s, predicate)
            if isinstance(o, Var):
                for node in sorted(closure, key=lambda i: i.value):
                    out.append(_extend(row, o, node))
            elif isinstance(o, Iri) and o in closure:
                out.append(dict(row))
        elif isinstance(o, Iri):
            for node in sorted(_reverse_zero_or_more(store, o, predicate), key=lambda i: i.value):
                out.append(_extend(row, s, node))
        elif isinstance(o, Literal):
            continue  # closure endpoints are IRIs in this subset
        else:
            raise EvaluationError(
                "a '*' path needs at least one bound endpoint"
            )
    return [row for row in out if row is not None]


def _apply_sequence(store: TripleStore, solutions: list[Binding], pattern: PathPattern) -> list[Binding]:
    assert isinstance(pattern.path, SequencePath)
    hop = Var("__seq_mid")
    first = TriplePattern(pattern.subject, pattern.path.first, hop)
    second = TriplePattern(hop, pattern.path.second, pattern.object)
    joined = _apply_triple(store, _apply_triple(store, solutions, first), second)
    for row in joined:
        row.pop(hop.name, None)
    return joined


def _apply_function(
    store: TripleStore,
    solutions: list[Binding],
    call: FunctionCall,
    registry: FunctionRegistry,
) -> list[Binding]:
    function = registry.get(call.function)
    out = []
    for row in solutions:
        subject = _substitute(call.subject, row)
        if isinstance(subject, Var):
            raise EvaluationError(
                f"property function subject ?{subject.name} must be bound "
                f"when {call.function.value} runs"
            )
        args = tuple(_substitute(a, row) for a in call.args)
        for produced in function(store, subject, args):
            extended: Optional[Binding] = dict(row)
            for name, value in produced.items():
                extended = _extend(extended, Var(name), value)
                if extended is None:
                    break
            if extended is not None:
                out.append(extended)
    return out


def _apply_filter(solutions: list[Binding], pattern: FilterPattern) -> list[Binding]:
    return [row for row in solutions if _filter_passes(row, pattern)]


def _filter_passes(row: Binding, pattern: FilterPattern) -> bool:
    for var, constant in pattern.disjuncts:
        value = row[var.name]
        if isinstance(constant, Iri):
            if isinstance(value, Iri) and value == constant:
                return True
        else:
            if isinstance(value, Literal):
                if value.datatype != constant.datatype:
                    raise EvaluationError(
                        f"cannot compare {value.datatype} literal with "
                        f"{constant.datatype} literal in filter on ?{var.name}"
                    )
                if value.lexical == constant.lexical:
                    return True
    return False


def _order_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return (0, "", term.value)
    if term.datatype in ("integer", "double"):
        return (1, "number", float(term.lexical))
    if term.datatype == "boolean":
        return (1, "boolean", term.lexical == "true")
    if term.datatype == "dateTime":
        # With the zone designator stripped, the fixed-width fields make byte
        # order chronological ("...54" < "...54.2" < "...55") without parsing.
        body = term.lexical
        body = body[:-6] if body.endswith("+00:00") else body.rstrip("Z")
        return (1, "dateTime", body)
    return (1, "string", term.lexical)
