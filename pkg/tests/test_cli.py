import json
from pathlib import Path

import pytest

from tracekg.cli import main
from tracekg.queries import machine_window_query, procedure_query
from tracekg.timefmt import parse_timestamp
from tracekg.vocab import DEFAULT_TERMS as T


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def workspace(tmp_path):
    return tmp_path / "ws"


@pytest.fixture()
def pipeline(workspace, tmp_path, capsys):
    """simulate + init + full ingest; returns (workspace, artifacts dir)."""
    out = tmp_path / "artifacts"
    assert main(["simulate", "--seed", "42", "--out", str(out)]) == 0
    ws = str(workspace)
    for argv in (
        ["--workspace", ws, "init"],
        ["--workspace", ws, "ingest-nodeset", str(out / "nodeset.xml")],
        ["--workspace", ws, "load-processes", str(out / "processes.jsonl")],
        ["--workspace", ws, "ingest-log", str(out / "log.csv")],
    ):
        assert main(argv) == 0
    capsys.readouterr()
    return workspace, out


def test_full_pipeline_and_query(pipeline, tmp_path, capsys, default_artifacts):
    workspace, _ = pipeline
    truth = default_artifacts.truth.machines[0]
    query_file = tmp_path / "window.rq"
    query_file.write_text(machine_window_query(
        T.plant("FullMachineTool"),
        truth.events[0].timestamp,
        truth.events[-1].timestamp,
    ), encoding="utf-8")

    code, out, _ = run(capsys, "--workspace", str(workspace), "query", str(query_file))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "NodeId,BrowseName,Time,Value"
    assert len(lines) == 1 + len(truth.events)

    # byte-stable across repeated evaluation
    code, again, _ = run(capsys, "--workspace", str(workspace), "query", str(query_file))
    assert code == 0 and again == out


def test_query_json_format(pipeline, tmp_path, capsys):
    workspace, _ = pipeline
    query_file = tmp_path / "vars.rq"
    from tracekg.queries import variables_query

    query_file.write_text(variables_query(T.plant("FullMachineTool")), encoding="utf-8")
    code, out, _ = run(capsys, "--workspace", str(workspace), "query",
                       str(query_file), "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert {r["BrowseName"]["value"] for r in rows} == {
        "IsRotating", "Locked", "UtilityName", "SpindleSpeed"
    }


def test_trace_procedure_matches_ground_truth(pipeline, capsys, default_artifacts):
    workspace, _ = pipeline
    code, out, _ = run(
        capsys, "--workspace", str(workspace), "trace", "procedure",
        "--unit", "OpcSS:FullMachineTool", "--procedure", "OpcSS:UnitProcedure1",
    )
    assert code == 0
    lines = out.splitlines()
    truth = [
        p for p in default_artifacts.truth.processes
        if p.procedure == T.plant("UnitProcedure1")
    ]
    assert len(lines) == 1 + sum(len(p.events) for p in truth)
    assert lines[0] == "Time,Value,NodeId,BrowseName,Process"


def test_trace_machine_window_and_output_file(pipeline, tmp_path, capsys, default_artifacts):
    workspace, _ = pipeline
    truth = default_artifacts.truth.machines[0]
    target = tmp_path / "trace.jsonl"
    code, _, _ = run(
        capsys, "--workspace", str(workspace), "trace", "machine",
        "--machine", "OpcSS:FullMachineTool",
        "--start", "2022-02-28T08:00:00Z", "--end", "2022-02-28T23:00:00Z",
        "--format", "json-lines", "--out", str(target),
    )
    assert code == 0
    record = json.loads(target.read_text(encoding="utf-8").splitlines()[0])
    assert len(record["events"]) == len(truth.events)


def test_query_on_uninitialized_workspace_is_missing_entity(tmp_path, capsys):
    empty = tmp_path / "nothing"
    empty.mkdir()
    query_file = tmp_path / "q.rq"
    query_file.write_text("SELECT ?x WHERE { ?x a ?y . }", encoding="utf-8")
    code, _, err = run(capsys, "--workspace", str(empty), "query", str(query_file))
    assert code == 3
    assert "not initialized" in err


def test_parse_error_exits_2(pipeline, tmp_path, capsys):
    workspace, _ = pipeline
    bad = tmp_path / "bad.rq"
    bad.write_text("SELECT WHERE {", encoding="utf-8")
    code, _, err = run(capsys, "--workspace", str(workspace), "query", str(bad))
    assert code == 2
    assert "error[ParseError]" in err


def test_invalid_range_exits_4(pipeline, capsys):
    workspace, _ = pipeline
    code, _, err = run(
        capsys, "--workspace", str(workspace), "trace", "machine",
        "--machine", "OpcSS:FullMachineTool",
        "--start", "2022-02-28T10:00:00Z", "--end", "2022-02-28T09:00:00Z",
    )
    assert code == 4
    assert "error[InvalidRangeError]" in err


def test_missing_machine_exits_3(pipeline, capsys):
    workspace, _ = pipeline
    code, _, err = run(
        capsys, "--workspace", str(workspace), "trace", "machine",
        "--machine", "OpcSS:NoSuchMachine",
        "--start", "2022-02-28T09:00:00Z", "--end", "2022-02-28T10:00:00Z",
    )
    assert code == 3


def test_missing_file_exits_5(pipeline, capsys):
    workspace, _ = pipeline
    code, _, err = run(capsys, "--workspace", str(workspace), "query", "/no/such/file.rq")
    assert code == 5


def test_locked_workspace_refuses_second_writer(pipeline, tmp_path, capsys):
    workspace, out = pipeline
    (workspace / ".lock").touch()
    code, _, err = run(capsys, "--workspace", str(workspace),
                       "ingest-log", str(out / "log.csv"))
    assert code == 5
    assert "locked" in err
    (workspace / ".lock").unlink()


def test_ingest_log_reports_counts(pipeline, tmp_path, capsys):
    workspace, _ = pipeline
    extra = tmp_path / "extra.csv"
    extra.write_text(
        "time,node_id,value,value_kind\n"
        "2022-02-28T22:00:00Z,ns=7;i=56510,true,boolean\n"
        "garbage,ns=7;i=56510,true,boolean\n",
        encoding="utf-8",
    )
    code, out, err = run(capsys, "--workspace", str(workspace), "ingest-log", str(extra))
    assert code == 0
    assert "accepted 1 rows, rejected 1" in out
    assert "line 3" in err


def test_simulate_determinism_via_cli(tmp_path, capsys):
    one, two = tmp_path / "one", tmp_path / "two"
    assert main(["simulate", "--seed", "7", "--out", str(one)]) == 0
    assert main(["simulate", "--seed", "7", "--out", str(two)]) == 0
    capsys.readouterr()
    for name in ("nodeset.xml", "processes.jsonl", "log.csv"):
        assert (one / name).read_bytes() == (two / name).read_bytes()


def test_workspace_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TRACEKG_WORKSPACE", str(tmp_path / "envws"))
    code, out, _ = run(capsys, "init")
    assert code == 0
    assert (tmp_path / "envws" / "graph.lt").exists()


def test_config_overrides_namespaces(tmp_path, capsys):
    ws = tmp_path / "ws"
    ws.mkdir()
    (ws / "config").write_text(
        "# plant namespace override\nprefix.OpcSS = http://plant.example/\n",
        encoding="utf-8",
    )
    code, _, _ = run(capsys, "--workspace", str(ws), "init")
    assert code == 0
    graph = (ws / "graph.lt").read_text(encoding="utf-8")
    assert "@prefix OpcSS: <http://plant.example/>" in graph
