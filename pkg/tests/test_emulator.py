import sqlite3
import urllib.parse

import pytest
from hypothesis import given, settings, strategies as st

from evasionlab.emulator import (
    ArityMismatch, BudgetExhausted, CloneError, DbState, EnvConfig, EventDescriptor, FeedMessage,
    FeedScript, MalformedEscape, ScriptError, SqlSyntaxError, StoreState, TaintLabel,
    UnknownTable, blob_concat, fnv1a64, idb_iterate, run_page, structured_clone, taint_of, unescape,
    websql_exec,
)
from evasionlab.emulator.scheduler import Scheduler
from evasionlab.emulator.taint import tag
from evasionlab.emulator.values import JSArray, JSObject, HostFunction

from conftest import page
from fixtures import SPRAY_LOOP


# -- sinks and budget ----------------------------------------------------


def test_eval_records_sink():
    trace = run_page(page('eval("1 + 2");'))
    assert [s.code for s in trace.sinks] == ["1 + 2"]
    assert trace.sinks[0].taint is None
    assert trace.termination == "completed"


def test_budget_of_one_step_is_exhausted():
    with pytest.raises(BudgetExhausted) as exc:
        run_page(page("var a = 1; var b = 2;"), EnvConfig(step_budget=1))
    assert exc.value.trace.termination == "budget_exhausted"


def test_scale_multiplies_budget():
    assert EnvConfig(step_budget=100, scale=0.5).effective_step_budget == 50


def test_spray_loop_hits_sink_per_iteration():
    trace = run_page(page(SPRAY_LOOP.replace("0x320", "3")))
    assert len(trace.sinks) == 3
    assert trace.sinks[0].code.startswith("var v0= '")


def test_uncaught_error_is_recorded_not_raised():
    trace = run_page(page("undefinedFn(); eval('x');"))
    assert trace.termination == "error"
    assert trace.errors and not trace.sinks


def test_strict_mode_raises():
    with pytest.raises(ScriptError):
        run_page(page("undefinedFn();"), EnvConfig(strict=True))


# -- unescape ------------------------------------------------------------


@pytest.mark.parametrize("text, expected", [
    ("%u4141", "\u4141"),
    ("%41%42", "AB"),
    ("plain", "plain"),
    ("", ""),
    ("a%u0041b", "aAb"),
])
def test_unescape_cases(text, expected):
    assert unescape(text) == expected


@pytest.mark.parametrize("bad", ["%u12", "%zz", "%", "%uGGGG"])
def test_unescape_malformed(bad):
    with pytest.raises(MalformedEscape):
        unescape(bad)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=40))
def test_unescape_matches_latin1_percent_decoding(data):
    # independent route: percent-encode bytes, decode as latin-1
    encoded = "".join(f"%{b:02X}" for b in data)
    assert unescape(encoded) == urllib.parse.unquote(encoded, encoding="latin-1")


def test_unescape_keeps_taint():
    label = TaintLabel(frozenset({"Network"}), frozenset({("ws", 1)}))
    assert taint_of(unescape("%41")) is None
    assert taint_of(unescape(tag("%41", label))) == label


# -- WebSQL --------------------------------------------------------------


def _sqlite_group_concat(rows, sep):
    con = sqlite3.connect(":memory:")
    con.execute("CREATE TABLE t (id, chunk)")
    con.executemany("INSERT INTO t (id, chunk) VALUES (?, ?)", rows)
    # rowid order is insertion order for a fresh table
    (value,) = con.execute(
        "SELECT GROUP_CONCAT(chunk, ?) FROM (SELECT chunk FROM t ORDER BY rowid)", (sep,)
    ).fetchone()
    return value


def _emulated_group_concat(rows, sep):
    db = DbState()
    websql_exec(db, "CREATE TABLE t (id, chunk)")
    for r in rows:
        websql_exec(db, "INSERT INTO t (id, chunk) VALUES (?, ?)", r)
    rs = websql_exec(db, f"SELECT GROUP_CONCAT(chunk, '{sep}') AS full FROM t")
    return rs.rows[0]["full"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 99), st.text(alphabet="abc;'x ", max_size=6)), max_size=8),
       st.sampled_from(["", ",", " | "]))
def test_group_concat_matches_sqlite(rows, sep):
    assert _emulated_group_concat(rows, sep) == _sqlite_group_concat(rows, sep)


def test_group_concat_on_empty_table_is_null():
    assert _emulated_group_concat([], "") is None is _sqlite_group_concat([], "")


def test_group_concat_default_separator():
    db = DbState()
    websql_exec(db, "CREATE TABLE t (c)")
    for v in "xyz":
        websql_exec(db, "INSERT INTO t (c) VALUES (?)", [v])
    assert websql_exec(db, "SELECT GROUP_CONCAT(c) AS g FROM t").rows[0]["g"] == "x,y,z"


def test_insert_reports_rowid():
    db = DbState()
    websql_exec(db, "CREATE TABLE t (c)")
    rs = websql_exec(db, "INSERT INTO t (c) VALUES (?)", ["a"])
    assert (rs.rows_affected, rs.insert_id) == (1, 1)


def test_arity_mismatch():
    db = DbState()
    websql_exec(db, "CREATE TABLE t (a, b)")
    with pytest.raises(ArityMismatch):
        websql_exec(db, "INSERT INTO t (a, b) VALUES (?, ?)", ["only one"])


def test_unknown_table_and_syntax():
    db = DbState()
    with pytest.raises(UnknownTable):
        websql_exec(db, "SELECT * FROM missing")
    with pytest.raises(SqlSyntaxError):
        websql_exec(db, "DROP TABLE t")


def test_group_concat_merges_taint():
    db = DbState()
    websql_exec(db, "CREATE TABLE t (c)")
    label = TaintLabel(frozenset({"Network"}), frozenset({("ws", 3)}))
    websql_exec(db, "INSERT INTO t (c) VALUES (?)", [tag("abc", label)])
    websql_exec(db, "INSERT INTO t (c) VALUES (?)", ["def"])
    out = websql_exec(db, "SELECT GROUP_CONCAT(c, '') AS g FROM t").rows[0]["g"]
    assert out == "abcdef" and taint_of(out) == label


# -- IndexedDB and Blob --------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.lists(st.one_of(st.integers(-50, 50).map(float), st.text(max_size=4)), unique=True, max_size=12))
def test_idb_iterate_orders_numbers_before_strings(keys):
    store = StoreState("s")
    for k in keys:
        store.add(f"v{k}", k)
    got = [k for k, _ in idb_iterate(store)]
    nums = sorted(k for k in keys if isinstance(k, float))
    strs = sorted(k for k in keys if isinstance(k, str))
    assert got == nums + strs


def test_idb_add_rejects_duplicate_and_autokeys():
    store = StoreState("s")
    assert store.add("a") == 1.0 and store.add("b") == 2.0
    with pytest.raises(KeyError):
        store.add("c", 1.0)
    store.put("c", 1.0)
    assert list(idb_iterate(store))[0] == (1.0, "c")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text(max_size=5), max_size=10))
def test_blob_concat_is_left_fold(parts):
    acc = ""
    for p in parts:
        acc = acc + p
    assert blob_concat(parts) == acc


# -- messaging -----------------------------------------------------------


def test_structured_clone_deep_copies():
    inner = JSArray([1.0, "x"])
    obj = JSObject({"a": inner, "b": inner})
    clone = structured_clone(obj)
    assert clone is not obj and clone.props["a"] is not inner
    assert clone.props["a"] is clone.props["b"]
    assert clone.props["a"].items == [1.0, "x"]


def test_structured_clone_rejects_functions():
    with pytest.raises(CloneError):
        structured_clone(JSObject({"f": HostFunction("f", lambda i, t, a: None)}))


WORKER_ECHO = ("w.js", 'onmessage = function (e) { postMessage(e.data + "!"); };')


def test_worker_roundtrip_carries_crossworker_taint():
    src = """
var w = new Worker("w.js");
w.onmessage = function (e) { eval(e.data); };
w.postMessage("1");
"""
    trace = run_page(page(src, WORKER_ECHO))
    assert trace.sink_codes() == ["1!"]
    assert "CrossWorker" in trace.sinks[0].taint.sources


def test_posting_function_is_clone_error():
    src = 'var w = new Worker("w.js"); w.postMessage(function () {});'
    trace = run_page(page(src, WORKER_ECHO))
    assert trace.errors[0]["kind"] == "DataCloneError"


def test_worker_globals_are_isolated():
    worker = ("w.js", "var secret = 1; postMessage(String(shared));")
    src = """
var shared = 2;
var w = new Worker("w.js");
w.onmessage = function (e) { eval(e.data); };
"""
    trace = run_page(page(src, worker))
    assert not trace.sinks
    assert trace.errors[0]["realm"] != "page"


# -- events --------------------------------------------------------------


def test_listeners_run_in_registration_order_including_duplicates():
    src = """
var log = "";
function h() { log += "h"; }
document.addEventListener("ping", function () { log += "a"; }, false);
document.addEventListener("ping", h, false);
document.addEventListener("ping", h, false);
document.addEventListener("ping", h, false);
document.addEventListener("done", function () { eval(log); }, false);
"""
    env = EnvConfig(event_trace=(EventDescriptor.of("ping"), EventDescriptor.of("done")))
    assert run_page(page(src), env).sink_codes() == ["ahhh"]


def test_event_payload_reaches_handler():
    src = 'document.addEventListener("keydown", function (e) { eval("k" + e.which); }, false);'
    env = EnvConfig(event_trace=(EventDescriptor.of("keydown", which=37),))
    assert run_page(page(src), env).sink_codes() == ["k37"]


def test_websocket_feed_is_network_tainted():
    src = """
var ws = new WebSocket("ws://127.0.0.1:8080/ws");
ws.onmessage = function (evt) { eval(evt.data.chunk); };
"""
    feed = FeedScript(messages=(FeedMessage("x=1", 0),))
    trace = run_page(page(src), EnvConfig(feed=feed))
    assert trace.sink_codes() == ["x=1"]
    assert trace.sinks[0].taint.sources == frozenset({"Network"})


# -- determinism and scheduling ------------------------------------------


def test_same_seed_same_hash():
    src = """
var a = new Worker("w.js"); var b = new Worker("w.js");
a.postMessage("a"); b.postMessage("b");
a.onmessage = function (e) { eval(e.data); };
b.onmessage = function (e) { eval(e.data); };
"""
    files = page(src, WORKER_ECHO)
    hashes = {run_page(files, EnvConfig(schedule_seed=7)).trace_hash for _ in range(3)}
    assert len(hashes) == 1


def test_fnv1a64_known_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.tuples(st.sampled_from("pqr"), st.integers(0, 3)), max_size=10))
def test_scheduler_fairness_bound(seed, spawns):
    """A task waits at most for the queue ahead of it plus the rest of its batch."""
    sched = Scheduler(seed)
    executed: list[int] = []
    bounds: dict[int, tuple[int, int]] = {}
    counter = iter(range(10**6))

    def make(children):
        tid = next(counter)

        def fn():
            executed.append(tid)
            ahead = len(sched.queue)
            for realm in children:
                child, child_fn = make(())
                bounds[child] = (len(executed), ahead + len(children) - 1)
                sched.enqueue(realm, child_fn)
        return tid, fn

    for i, (realm, fanout) in enumerate(spawns):
        tid, fn = make("pqr"[:fanout])
        bounds[tid] = (0, len(sched.queue))
        sched.enqueue(realm, fn)
    sched.run(lambda t: t.fn())
    assert sorted(executed) == sorted(bounds)
    for tid, (done_before, limit) in bounds.items():
        assert executed.index(tid) - done_before <= limit
