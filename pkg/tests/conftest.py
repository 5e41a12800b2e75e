from pathlib import Path

import pytest


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {outcome}", flush=True)

from tracekg.histvalues import default_registry
from tracekg.nodeset import parse_nodeset, to_triples
from tracekg.process import load_ledger
from tracekg.rdf import TripleStore
from tracekg.simulate import default_config, generate
from tracekg.tsdb import TimeSeriesStore
from tracekg.vocab import DEFAULT_TERMS, install, materialize_alignment

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def terms():
    return DEFAULT_TERMS


@pytest.fixture(scope="session")
def default_artifacts():
    return generate(default_config(seed=42))


def build_stores(artifacts, terms=DEFAULT_TERMS):
    """Ingest all three artifacts into fresh stores, alignment materialized."""
    store = TripleStore()
    install(store, terms)
    nodes, machines = parse_nodeset(artifacts.nodeset_xml, terms)
    store.insert_all(to_triples(nodes, machines, terms))
    load_ledger(store, artifacts.process_ledger, terms)
    materialize_alignment(store, terms)
    ts = TimeSeriesStore()
    report = ts.ingest_log(artifacts.log_csv)
    assert not report.errors
    return store, ts


@pytest.fixture(scope="session")
def default_stores(default_artifacts):
    return build_stores(default_artifacts)


@pytest.fixture(scope="session")
def default_registry_fixture(default_stores):
    _, ts = default_stores
    return default_registry(ts)


@pytest.fixture()
def fixture_text():
    def read(name: str) -> str:
        return (FIXTURES / name).read_text(encoding="utf-8")

    return read


@pytest.fixture()
def sample_stores(fixture_text):
    """Stores built from the hand-written fixtures (not the simulator)."""
    store = TripleStore()
    install(store)
    nodes, machines = parse_nodeset(fixture_text("nodeset_annotated.xml"))
    store.insert_all(to_triples(nodes, machines))
    load_ledger(store, fixture_text("sample_processes.jsonl"))
    materialize_alignment(store)
    ts = TimeSeriesStore()
    report = ts.ingest_log(fixture_text("sample_log.csv"))
    assert not report.errors
    return store, ts
