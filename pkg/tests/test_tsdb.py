import random
import threading
from datetime import timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracekg.errors import InvalidRangeError, ParseError
from tracekg.timefmt import parse_timestamp
from tracekg.tsdb import TimeSeriesStore, ValueChange

T0 = parse_timestamp("2022-02-28T09:00:00Z")


def ts_at(seconds: float):
    return T0 + timedelta(seconds=seconds)


def test_append_then_point_query():
    store = TimeSeriesStore()
    change = ValueChange(ts_at(54), "ns=7;i=56510", True)
    store.append(change)
    assert store.range_query("ns=7;i=56510", ts_at(54), ts_at(54)) == [change]


def test_equal_timestamps_keep_append_order():
    store = TimeSeriesStore()
    first = ValueChange(ts_at(1), "n", "a")
    second = ValueChange(ts_at(1), "n", "b")
    store.append(first)
    store.append(second)
    assert store.range_query("n", ts_at(0), ts_at(2)) == [first, second]


def test_sample_log_window_includes_rotation_start(fixture_text):
    store = TimeSeriesStore()
    report = store.ingest_log(fixture_text("sample_log.csv"))
    assert report.accepted == 10 and not report.errors
    window = store.range_query(
        "ns=7;i=56510",
        parse_timestamp("2022-02-28T09:00:00Z"),
        parse_timestamp("2022-02-28T09:10:00Z"),
    )
    assert (window[0].timestamp, window[0].value) == (parse_timestamp("2022-02-28T09:00:54Z"), True)
    # closed interval: the 09:11:02Z change is outside
    assert all(c.timestamp <= parse_timestamp("2022-02-28T09:10:00Z") for c in window)
    assert len(window) == 3


def test_empty_series_yields_empty_list():
    assert TimeSeriesStore().range_query("nope", ts_at(0), ts_at(1)) == []


def test_invalid_range_is_rejected():
    store = TimeSeriesStore()
    with pytest.raises(InvalidRangeError):
        store.range_query("n", ts_at(2), ts_at(1))


def test_counting_oracle_on_bulk_appends():
    rng = random.Random(3)
    store = TimeSeriesStore()
    expected_counts = {}
    for _ in range(100_000):
        node = f"ns=9;i={rng.randint(0, 49)}"
        store.append(ValueChange(ts_at(rng.randint(0, 10_000)), node, rng.randint(0, 5)))
        expected_counts[node] = expected_counts.get(node, 0) + 1
    assert store.count() == 100_000
    for node, expected in expected_counts.items():
        assert store.count(node) == expected


def _random_store(rng, node_count=5, events=300):
    store = TimeSeriesStore()
    log = []
    for _ in range(events):
        change = ValueChange(
            ts_at(rng.randint(0, 500)), f"n{rng.randint(0, node_count - 1)}", rng.random()
        )
        store.append(change)
        log.append(change)
    return store, log


def test_range_query_equals_linear_scan():
    rng = random.Random(5)
    store, log = _random_store(rng)
    for _ in range(50):
        lo, hi = sorted((rng.randint(0, 500), rng.randint(0, 500)))
        node = f"n{rng.randint(0, 4)}"
        got = store.range_query(node, ts_at(lo), ts_at(hi))
        expected = [
            (i, c) for i, c in enumerate(log)
            if c.node_id == node and ts_at(lo) <= c.timestamp <= ts_at(hi)
        ]
        expected.sort(key=lambda pair: (pair[1].timestamp, pair[0]))
        assert got == [c for _, c in expected]


@given(st.lists(st.tuples(st.integers(0, 100), st.integers(0, 3)), max_size=80),
       st.integers(0, 100), st.integers(0, 100), st.integers(0, 100))
def test_adjacent_windows_partition(events, a, b, c):
    a, b, c = sorted((a, b, c))
    store = TimeSeriesStore()
    for offset, node in events:
        store.append(ValueChange(ts_at(offset), f"n{node}", offset))
    whole = store.range_query("n0", ts_at(a), ts_at(c))
    left = store.range_query("n0", ts_at(a), ts_at(b))
    right = store.range_after("n0", ts_at(b), ts_at(c))
    assert left + right == whole


def test_full_log_equals_union_of_series():
    rng = random.Random(9)
    store, log = _random_store(rng)
    union = []
    for node in store.node_ids():
        union.extend(store.range_query(node, ts_at(0), ts_at(500)))
    assert sorted((c.timestamp, c.node_id, c.value) for c in union) == sorted(
        (c.timestamp, c.node_id, c.value) for c in log
    )


def test_reads_independent_of_append_order_for_distinct_timestamps():
    changes = [ValueChange(ts_at(i), "n", i) for i in range(20)]
    forward, backward = TimeSeriesStore(), TimeSeriesStore()
    for c in changes:
        forward.append(c)
    for c in reversed(changes):
        backward.append(c)
    assert forward.range_query("n", ts_at(0), ts_at(20)) == backward.range_query(
        "n", ts_at(0), ts_at(20)
    )


def test_ingest_empty_document():
    assert TimeSeriesStore().ingest_log("") .accepted == 0


def test_ingest_requires_exact_header():
    with pytest.raises(ParseError, match="header"):
        TimeSeriesStore().ingest_log("when,node,value,kind\n")


def test_ingest_keeps_good_rows_and_reports_bad_ones():
    rows = ["time,node_id,value,value_kind"]
    for i in range(10):
        rows.append(f"2022-02-28T09:00:{i:02d}Z,n,{i},integer")
    rows[4] = "2022-02-28T09:99:99Z,n,3,integer"  # bad timestamp
    store = TimeSeriesStore()
    report = store.ingest_log("\n".join(rows) + "\n")
    assert report.accepted == 9
    assert len(report.errors) == 1
    assert report.errors[0][0] == 5  # 1-based line of the bad row


def test_export_ingest_round_trip_preserves_answers():
    rng = random.Random(21)
    store, _ = _random_store(rng, node_count=3, events=200)
    text = store.export_log()
    clone = TimeSeriesStore()
    clone.ingest_log(text)
    for node in store.node_ids():
        assert clone.range_query(node, ts_at(0), ts_at(500)) == store.range_query(
            node, ts_at(0), ts_at(500)
        )
    assert clone.export_log() == text


def test_values_round_trip_through_csv():
    store = TimeSeriesStore()
    values = [True, False, 17, -3, 2.5, 0.1, 'text,with,"commas"', "plain"]
    for i, v in enumerate(values):
        store.append(ValueChange(ts_at(i), "n", v))
    clone = TimeSeriesStore()
    clone.ingest_log(store.export_log())
    got = [c.value for c in clone.range_query("n", ts_at(0), ts_at(10))]
    assert got == values
    assert [type(v) for v in got] == [type(v) for v in values]


def test_persistence_replay(tmp_path):
    with TimeSeriesStore(tmp_path / "tsdata") as store:
        store.append(ValueChange(ts_at(1), "ns=7;i=56510", True))
        store.append(ValueChange(ts_at(2), "ns=7;i=56510", False))
        store.append(ValueChange(ts_at(3), "other", 1.5))
    with TimeSeriesStore(tmp_path / "tsdata") as reopened:
        assert reopened.count() == 3
        assert [c.value for c in reopened.range_query("ns=7;i=56510", ts_at(0), ts_at(5))] == [True, False]
        reopened.append(ValueChange(ts_at(4), "other", 2.5))
    with TimeSeriesStore(tmp_path / "tsdata") as third:
        assert [c.value for c in third.range_query("other", ts_at(0), ts_at(5))] == [1.5, 2.5]


def test_segment_rollover(tmp_path):
    store = TimeSeriesStore(tmp_path / "tsdata")
    store.SEGMENT_RECORDS = 10
    for i in range(25):
        store.append(ValueChange(ts_at(i), "n", i))
    store.close()
    segments = list((tmp_path / "tsdata").glob("*.seg"))
    assert len(segments) == 3
    reopened = TimeSeriesStore(tmp_path / "tsdata")
    assert [c.value for c in reopened.range_query("n", ts_at(0), ts_at(30))] == list(range(25))


def test_concurrent_appenders_are_serialized():
    store = TimeSeriesStore()

    def work(worker):
        for i in range(200):
            store.append(ValueChange(ts_at(i), f"w{worker}", i))

    threads = [threading.Thread(target=work, args=(w,)) for w in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert store.count() == 800
    for w in range(4):
        assert store.count(f"w{w}") == 200
