"""Deterministic plant scenario generator.

Stands in for a live machine park, its logging agent, and the execution
system: one call emits a mutually consistent information-model document,
process ledger, and value-change log, plus the ground truth every test
compares against.  The same seed always yields byte-identical artifacts.

Value dynamics are simple on purpose (booleans toggle, doubles take a
bounded random walk, integers step, strings cycle through their states);
correctness testing needs consistency, not realism.  Event timestamps are
strictly increasing within one machine, so result ordering is total.
"""

from __future__ import annotations

import csv
import io
import json
import random
import xml.sax.saxutils as saxutils
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Optional

from .errors import ValidationError
from .rdf import Iri
from .timefmt import format_timestamp
from .traces import TraceEvent
from .tsdb import LOG_HEADER, Value, value_kind, value_lexical
from .vocab import DEFAULT_TERMS, QUALIFYING_TYPE_DEFINITIONS, Terms

VALUE_KINDS = ("boolean", "integer", "double", "string")

# Variable node numbering: first three ids mirror a familiar machine-tool
# layout, later variables continue in steps of ten.
_VARIABLE_IDS = (56510, 56519, 56600)


@dataclass
class VariableSpec:
    browse_name: str
    type_definition: str
    value_kind: str
    rate: float = 1.0
    states: tuple[str, ...] = ("Idle", "Running", "Held")


@dataclass
class MachineSpec:
    name: str
    variables: list[VariableSpec]
    procedures: list[str]
    articles: list[str]
    process_count: int = 0
    duration_ms: tuple[int, int] = (300_000, 600_000)
    gap_ms: tuple[int, int] = (60_000, 180_000)
    event_gap_ms: tuple[int, int] = (4_000, 20_000)
    schedule: Optional[list[tuple[str, str]]] = None  # (procedure, article), cycled
    allow_overlap: bool = False  # permit negative gaps, i.e. overlapping windows


@dataclass
class ScenarioConfig:
    seed: int
    machines: list[MachineSpec]
    day: str = "2022-02-28"


@dataclass
class MachineTruth:
    name: str
    individual: Iri
    machine_node_id: str
    variables: list[tuple[str, str, str]]  # (node_id, browse_name, type_definition)
    events: list[TraceEvent]

    def qualifying(self) -> list[tuple[str, str]]:
        return [
            (node_id, browse)
            for node_id, browse, type_def in self.variables
            if type_def in QUALIFYING_TYPE_DEFINITIONS
        ]


@dataclass
class ProcessTruth:
    process: Iri
    unit: Iri
    procedure: Iri
    article: Iri
    start: datetime
    end: datetime
    events: list[TraceEvent]


@dataclass
class GroundTruthLedger:
    machines: list[MachineTruth]
    processes: list[ProcessTruth]


@dataclass
class ScenarioArtifacts:
    nodeset_xml: str
    process_ledger: str
    log_csv: str
    truth: GroundTruthLedger


def default_config(seed: int = 42) -> ScenarioConfig:
    """One machine tool with three logged variables and one unlogged property."""
    machine = MachineSpec(
        name="FullMachineTool",
        variables=[
            VariableSpec("IsRotating", "BaseDataVariableType", "boolean"),
            VariableSpec("Locked", "BaseDataVariableType", "boolean"),
            VariableSpec("UtilityName", "FiniteStateVariableType", "string",
                         states=("Air", "Water", "Oil")),
            VariableSpec("SpindleSpeed", "AnalogUnitRangeType", "double"),
            VariableSpec("SerialNumber", "PropertyType", "string"),
        ],
        procedures=["UnitProcedure1", "UnitProcedure2"],
        articles=["Article1", "Article2"],
        process_count=4,
        schedule=[
            ("UnitProcedure1", "Article1"),
            ("UnitProcedure2", "Article2"),
            ("UnitProcedure2", "Article2"),
            ("UnitProcedure1", "Article1"),
        ],
    )
    return ScenarioConfig(seed=seed, machines=[machine])


def _validate(config: ScenarioConfig) -> None:
    if not config.machines:
        raise ValidationError("scenario needs at least one machine")
    names = [m.name for m in config.machines]
    if len(set(names)) != len(names):
        raise ValidationError("machine names must be unique")
    for machine in config.machines:
        if not machine.variables:
            raise ValidationError(f"machine {machine.name}: needs at least one variable")
        browses = [v.browse_name for v in machine.variables]
        if len(set(browses)) != len(browses):
            raise ValidationError(f"machine {machine.name}: duplicate variable names")
        for spec in machine.variables:
            if spec.value_kind not in VALUE_KINDS:
                raise ValidationError(
                    f"machine {machine.name}: unknown value kind {spec.value_kind!r}"
                )
            if spec.rate <= 0:
                raise ValidationError(f"machine {machine.name}: rate must be positive")
        for name, (lo, hi) in (("duration_ms", machine.duration_ms),
                               ("gap_ms", machine.gap_ms),
                               ("event_gap_ms", machine.event_gap_ms)):
            if lo > hi:
                raise ValidationError(f"machine {machine.name}: {name} range is inverted")
        if machine.duration_ms[0] <= 0:
            raise ValidationError(f"machine {machine.name}: durations must be positive")
        if machine.event_gap_ms[0] < 1:
            raise ValidationError(f"machine {machine.name}: event gaps must be >= 1 ms")
        if machine.gap_ms[0] < 0 and not machine.allow_overlap:
            raise ValidationError(
                f"machine {machine.name}: negative process gaps need allow_overlap"
            )
        if machine.process_count and not machine.schedule:
            if not machine.procedures or not machine.articles:
                raise ValidationError(
                    f"machine {machine.name}: processes need procedures and articles"
                )
        for procedure, article in machine.schedule or []:
            if procedure not in machine.procedures:
                raise ValidationError(
                    f"machine {machine.name}: schedule names unknown procedure {procedure!r}"
                )
            if article not in machine.articles:
                raise ValidationError(
                    f"machine {machine.name}: schedule names unknown article {article!r}"
                )


def generate(config: ScenarioConfig, terms: Terms = DEFAULT_TERMS) -> ScenarioArtifacts:
    """Produce the three artifacts and the ground-truth ledger for one scenario."""
    _validate(config)
    rng = random.Random(config.seed)
    try:
        day_start = datetime.strptime(config.day, "%Y-%m-%d").replace(
            hour=8, tzinfo=timezone.utc
        )
    except ValueError:
        raise ValidationError(f"bad scenario day: {config.day!r}") from None

    machines: list[MachineTruth] = []
    processes: list[ProcessTruth] = []
    ledger_records: list[dict] = []
    process_number = 1
    for machine_index, spec in enumerate(config.machines):
        truth = _machine_skeleton(spec, machine_index, terms)
        windows = _plan_processes(spec, rng, day_start)
        truth.events = _emit_events(spec, truth, rng, day_start, windows)
        for start, end, procedure_local, article_local in windows:
            number = process_number
            process_number += 1
            processes.append(ProcessTruth(
                process=terms.plant(f"Process{number}"),
                unit=truth.individual,
                procedure=terms.plant(procedure_local),
                article=terms.plant(article_local),
                start=start, end=end,
                events=[e for e in truth.events if start <= e.timestamp <= end],
            ))
            ledger_records.append({
                "process": f"OpcSS:Process{number}",
                "unit": f"OpcSS:{spec.name}",
                "procedure": f"OpcSS:{procedure_local}",
                "procedure_type": "UnitProcedure",
                "start": format_timestamp(start),
                "end": format_timestamp(end),
                "products": [{"product": f"OpcSS:Product{number}",
                              "article": f"OpcSS:{article_local}"}],
            })
        machines.append(truth)

    truth_ledger = GroundTruthLedger(machines, processes)
    return ScenarioArtifacts(
        nodeset_xml=_render_nodeset(config, machines, terms),
        process_ledger="".join(json.dumps(r, ensure_ascii=False) + "\n" for r in ledger_records),
        log_csv=_render_log(machines),
        truth=truth_ledger,
    )


def _machine_node_ids(spec: MachineSpec, machine_index: int) -> tuple[str, str, list[str]]:
    ns = 7 + machine_index
    machine_node = f"ns={ns};i=56001"
    container_node = f"ns={ns};i=56002"
    variable_nodes = []
    for j in range(len(spec.variables)):
        if j < len(_VARIABLE_IDS):
            ident = _VARIABLE_IDS[j]
        else:
            ident = _VARIABLE_IDS[-1] + 10 * (j - len(_VARIABLE_IDS) + 1)
        variable_nodes.append(f"ns={ns};i={ident}")
    return machine_node, container_node, variable_nodes


def _machine_skeleton(spec: MachineSpec, machine_index: int, terms: Terms) -> MachineTruth:
    machine_node, _, variable_nodes = _machine_node_ids(spec, machine_index)
    return MachineTruth(
        name=spec.name,
        individual=terms.plant(spec.name),
        machine_node_id=machine_node,
        variables=[
            (node_id, v.browse_name, v.type_definition)
            for node_id, v in zip(variable_nodes, spec.variables)
        ],
        events=[],
    )


def _plan_processes(spec: MachineSpec, rng: random.Random,
                    day_start: datetime) -> list[tuple[datetime, datetime, str, str]]:
    windows = []
    cursor = day_start
    previous_start = day_start
    for k in range(spec.process_count):
        start = cursor + timedelta(milliseconds=rng.randint(*spec.gap_ms))
        # Overlapping windows may move backwards, but never before the
        # previous start: process numbering stays ordered by start time.
        start = max(start, previous_start + timedelta(milliseconds=1))
        end = start + timedelta(milliseconds=rng.randint(*spec.duration_ms))
        previous_start = start
        cursor = end
        if spec.schedule:
            procedure, article = spec.schedule[k % len(spec.schedule)]
        else:
            procedure = rng.choice(spec.procedures)
            article = rng.choice(spec.articles)
        windows.append((start, end, procedure, article))
    return windows


class _ValueProcess:
    """Per-variable value generator; each call advances the variable's state."""

    def __init__(self, spec: VariableSpec, rng: random.Random):
        self.spec = spec
        self.rng = rng
        self.flag = False
        self.level = 50.0
        self.counter = 0
        self.step = 500

    def next_value(self) -> Value:
        kind = self.spec.value_kind
        if kind == "boolean":
            self.flag = not self.flag
            return self.flag
        if kind == "double":
            self.level = round(min(100.0, max(0.0, self.level + self.rng.uniform(-5.0, 5.0))), 3)
            return self.level
        if kind == "integer":
            self.step = min(1000, max(0, self.step + self.rng.randint(-25, 25)))
            return self.step
        value = self.spec.states[self.counter % len(self.spec.states)]
        self.counter += 1
        return value


def _emit_events(spec: MachineSpec, truth: MachineTruth, rng: random.Random,
                 day_start: datetime,
                 windows: list[tuple[datetime, datetime, str, str]]) -> list[TraceEvent]:
    logged = [
        (node_id, variable)
        for (node_id, _, type_def), variable in zip(truth.variables, spec.variables)
        if type_def in QUALIFYING_TYPE_DEFINITIONS
    ]
    if not logged:
        return []
    horizon = (windows[-1][1] if windows else day_start) + timedelta(
        milliseconds=spec.duration_ms[1]
    )
    weights = [variable.rate for _, variable in logged]
    generators = {node_id: _ValueProcess(variable, rng) for node_id, variable in logged}
    events = []
    cursor = day_start
    while True:
        cursor = cursor + timedelta(milliseconds=rng.randint(*spec.event_gap_ms))
        if cursor > horizon:
            return events
        node_id, variable = rng.choices(logged, weights=weights)[0]
        events.append(TraceEvent(
            cursor, node_id, variable.browse_name, generators[node_id].next_value()
        ))


def _render_nodeset(config: ScenarioConfig, machines: list[MachineTruth],
                    terms: Terms) -> str:
    q = saxutils.quoteattr
    lines = ["<Nodes>"]
    lines.append('  <Object NodeId="ns=1;i=1001" BrowseName="Machines">')
    for spec, truth in zip(config.machines, machines):
        lines.append(f'    <Reference Kind="organizes" Target={q(truth.machine_node_id)}/>')
    lines.append("  </Object>")
    for machine_index, (spec, truth) in enumerate(zip(config.machines, machines)):
        machine_node, container_node, variable_nodes = _machine_node_ids(spec, machine_index)
        lines.append(
            f"  <Object NodeId={q(machine_node)} BrowseName={q(spec.name)} "
            f'TypeDefinition="MachineType">'
        )
        lines.append(f'    <Reference Kind="hasComponent" Target={q(container_node)}/>')
        lines.append("  </Object>")
        lines.append(f'  <Object NodeId={q(container_node)} BrowseName="Monitoring">')
        for node_id in variable_nodes:
            lines.append(f'    <Reference Kind="hasComponent" Target={q(node_id)}/>')
        lines.append("  </Object>")
        for node_id, variable in zip(variable_nodes, spec.variables):
            lines.append(
                f"  <Variable NodeId={q(node_id)} BrowseName={q(variable.browse_name)} "
                f"TypeDefinition={q(variable.type_definition)}/>"
            )
    lines.append("  <MachinesFolder>")
    for truth in machines:
        lines.append(
            f"    <Machine NodeId={q(truth.machine_node_id)} "
            f"Identity={q(truth.individual.value)} DisplayName={q(truth.name)}/>"
        )
    lines.append("  </MachinesFolder>")
    lines.append("</Nodes>")
    return "".join(line + "\n" for line in lines)


def _render_log(machines: list[MachineTruth]) -> str:
    rows = []
    for machine_index, truth in enumerate(machines):
        for event in truth.events:
            rows.append((event.timestamp, machine_index, event.node_id, event.value))
    rows.sort(key=lambda r: (r[0], r[1]))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LOG_HEADER)
    for timestamp, _, node_id, value in rows:
        writer.writerow([format_timestamp(timestamp), node_id,
                         value_lexical(value), value_kind(value)])
    return out.getvalue()


# -- config file I/O ---------------------------------------------------------


def _ms_range(value) -> tuple[int, int]:
    lo, hi = value
    return int(lo), int(hi)


def config_from_json(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
        machines = []
        for m in data["machines"]:
            machines.append(MachineSpec(
                name=m["name"],
                variables=[
                    VariableSpec(
                        browse_name=v["browse_name"],
                        type_definition=v["type_definition"],
                        value_kind=v["value_kind"],
                        rate=v.get("rate", 1.0),
                        states=tuple(v.get("states", ("Idle", "Running", "Held"))),
                    )
                    for v in m["variables"]
                ],
                procedures=list(m.get("procedures", [])),
                articles=list(m.get("articles", [])),
                process_count=int(m.get("process_count", 0)),
                duration_ms=_ms_range(m.get("duration_ms", (300_000, 600_000))),
                gap_ms=_ms_range(m.get("gap_ms", (60_000, 180_000))),
                event_gap_ms=_ms_range(m.get("event_gap_ms", (4_000, 20_000))),
                schedule=[(s["procedure"], s["article"]) for s in m["schedule"]]
                if m.get("schedule") else None,
                allow_overlap=m.get("allow_overlap", False),
            ))
        return ScenarioConfig(seed=data["seed"], machines=machines,
                              day=data.get("day", "2022-02-28"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad scenario config: {exc}") from None
