import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from evasionlab.emulator import EnvConfig, EventDescriptor, FeedScript, run_page
from evasionlab.js import parse_source, print_ast
from evasionlab.obfuscation import (
    ALL_TECHNIQUES, Backend, ChunkPolicy, CyclicDag, EmptyPayload, EventBinding, FragmentLeak, Guard,
    InvalidBinding, MissingHookSite, StageNode, Technique, UnsupportedConstruct, WorkerDag,
    check_secrecy, default_bindings, emit_bundle, load_bundle, make_variant, nested_dag,
    plan_delegated, plan_distributed, plan_user_driven, split_payload, verify_equivalence,
)
from evasionlab.obfuscation.distributed import assign_chunks, default_dag, simulate

from conftest import bundle_env


# -- chunking ------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.text(min_size=1, max_size=300), st.integers(1, 40))
def test_fixed_size_split_reassembles(payload, size):
    plan = split_payload(payload, ChunkPolicy("fixed_size", size))
    assert plan.reassemble() == payload
    assert plan.max_chunk_len <= size
    assert [cid for cid, _ in plan.chunks] == list(range(len(plan)))


def test_statement_boundary_split():
    src = "var a = 1;\nvar b = 2;\neval(a + b);\n"
    plan = split_payload(src, ChunkPolicy("statement_boundary"))
    assert plan.reassemble() == src
    assert [t for _, t in plan.chunks] == ["var a = 1;\n", "var b = 2;\n", "eval(a + b);\n"]


def test_empty_payload_rejected():
    with pytest.raises(EmptyPayload):
        split_payload("", ChunkPolicy())


def test_statement_split_of_unparseable_region():
    with pytest.raises(UnsupportedConstruct):
        split_payload("var = ;", ChunkPolicy("statement_boundary"))


def test_bad_policy():
    with pytest.raises(ValueError):
        ChunkPolicy("random")
    with pytest.raises(ValueError):
        ChunkPolicy(chunk_size=0)


# -- bundles -------------------------------------------------------------


def test_every_bundle_keeps_the_region_secret(manifest, all_bundles):
    for (sid, _), b in all_bundles.items():
        check_secrecy(b.files, manifest.sample(sid).region_text, b.chunk_size)


def test_secrecy_check_catches_leak(manifest):
    sample = manifest.sample("A")
    b = plan_delegated(sample, Backend.WEBSQL)
    leaked = dataclasses.replace(b.files.page, body=b.files.page.body + "\n// " + sample.region_text[40:80])
    files = type(b.files)([leaked, *[f for f in b.files if f.id != leaked.id]])
    with pytest.raises(FragmentLeak):
        check_secrecy(files, sample.region_text, 16)


def test_feed_reassembles_region(manifest, all_bundles):
    for (sid, tech), b in all_bundles.items():
        text = "".join(m.payload for m in sorted(b.feed.messages, key=lambda m: m.id))
        assert text == manifest.sample(sid).region_text, (sid, tech)


def test_emitted_files_parse_and_roundtrip(all_bundles):
    for b in all_bundles.values():
        for f in b.files.scripts():
            ast = parse_source(f.body)
            assert parse_source(print_ast(ast)) == ast


def test_emit_and_load_roundtrip(tmp_path, bundle_of):
    b = bundle_of("B", "DelegatedIndexedDB")
    written = emit_bundle(b, tmp_path)
    assert {f.role for f in written} >= {"page", "feed"}
    again = load_bundle(tmp_path)
    assert again.technique is Technique.DELEGATED_INDEXEDDB
    assert again.feed == b.feed
    assert [f.body for f in again.files] == [f.body for f in b.files]
    assert again.metadata == b.metadata


def test_emit_is_byte_stable(tmp_path, bundle_of):
    b = bundle_of("C", "Distributed")
    emit_bundle(b, tmp_path / "x")
    emit_bundle(b, tmp_path / "y")
    for p in (tmp_path / "x").iterdir():
        assert p.read_bytes() == (tmp_path / "y" / p.name).read_bytes()


# -- equivalence ---------------------------------------------------------


@pytest.mark.parametrize("technique", [t.value for t in ALL_TECHNIQUES])
def test_variant_equivalent_to_original(manifest, bundle_of, technique):
    sample = manifest.sample("D")
    b = bundle_of("D", technique)
    report = verify_equivalence(sample.files, b, bundle_env(b))
    assert report.equal, report.reason
    assert report.staging_sinks == 1


def test_dropped_chunk_breaks_equivalence(manifest, bundle_of):
    b = bundle_of("D", "DelegatedWebSQL")
    feed = FeedScript(b.feed.messages[1:], b.feed.close_after, b.feed.framing)
    broken = dataclasses.replace(b, feed=feed)
    assert not verify_equivalence(manifest.sample("D").files, broken, bundle_env(broken)).equal


def test_user_driven_needs_its_events(manifest, bundle_of):
    b = bundle_of("A", "UserDriven")
    report = verify_equivalence(manifest.sample("A").files, b, EnvConfig(feed=b.feed))
    assert not report.equal and report.bundle_sinks == []


@pytest.mark.parametrize("seed", [0, 1, 5])
def test_shuffled_wire_order_still_equivalent(manifest, seed):
    sample = manifest.sample("B")
    b = plan_delegated(sample, Backend.INDEXEDDB, ChunkPolicy(seed=seed))
    assert verify_equivalence(sample.files, b, bundle_env(b)).equal


def test_statement_boundary_variant(manifest):
    sample = manifest.sample("C")
    policy = ChunkPolicy("statement_boundary")
    b = plan_delegated(sample, Backend.BLOB, policy)
    assert verify_equivalence(sample.files, b, bundle_env(b)).equal


# -- distributed DAG -----------------------------------------------------


def test_default_dag_shape():
    dag = default_dag()
    order = dag.topological()
    assert order.index("ww1") < order.index("ww3") and order.index("ww2") < order.index("ww3")
    assert order[-1] == "ww4" and dag.launch().stage_id == "ww4"


def test_cycle_rejected():
    dag = WorkerDag(
        (StageNode("a", "fetch"), StageNode("b", "launch")),
        (("a", "b"), ("b", "a")),
    )
    with pytest.raises(CyclicDag):
        dag.topological()


@settings(max_examples=50, deadline=None)
@given(st.text(min_size=4, max_size=200), st.integers(1, 30))
def test_dag_simulation_reassembles(payload, size):
    dag = default_dag()
    plan = split_payload(payload, ChunkPolicy(chunk_size=size))
    if len(plan) < len(dag.contribution_order()):
        return
    slices = assign_chunks(dag, list(plan.chunks))
    assert simulate(dag, slices) == payload


def test_nested_dag_variant_equivalent(manifest):
    sample = manifest.sample("A")
    b = plan_distributed(sample, nested_dag())
    assert verify_equivalence(sample.files, b, bundle_env(b)).equal
    assert {"ww3a.js", "ww3b.js", "ww3c.js"} <= {r["realm"] for r in
                                        run_page(b.files, bundle_env(b)).of_type("worker_start")}


@pytest.mark.parametrize("seed", range(5))
def test_distributed_sink_is_schedule_independent(bundle_of, seed):
    b = bundle_of("C", "Distributed")
    base = run_page(b.files, bundle_env(b)).sink_codes()
    assert run_page(b.files, bundle_env(b, schedule_seed=seed)).sink_codes() == base


# -- user-driven ---------------------------------------------------------


def test_user_driven_plain_run_has_no_sinks(bundle_of):
    b = bundle_of("B", "UserDriven")
    assert run_page(b.files, EnvConfig(feed=b.feed)).sinks == []


def test_user_driven_documented_trace(bundle_of):
    b = bundle_of("B", "UserDriven")
    assert [ev.kind for ev in b.required_event_trace] == ["keydown", "food"]
    assert dict(b.required_event_trace[0].payload) == {"which": 37}


def test_preset_guard_fires_on_first_food(manifest, carrier):
    guard = Guard(threshold=0, preset=True)
    b = plan_user_driven(manifest.sample("D"), carrier, default_bindings(guard))
    trace = run_page(b.files, EnvConfig(feed=b.feed, event_trace=(EventDescriptor.of("food"),)))
    assert len(trace.sinks) == 1


def test_missing_hook_site(manifest, carrier):
    bindings = [EventBinding("keydown", "noSuchFunction", "spray_step")]
    with pytest.raises(MissingHookSite):
        plan_user_driven(manifest.sample("D"), carrier, bindings)


def test_invalid_binding():
    with pytest.raises(InvalidBinding):
        EventBinding("keydown", "changeDirection", "detonate")


def test_carrier_without_page_is_rejected(manifest):
    with pytest.raises(ValueError):
        make_variant(manifest.sample("A"), "UserDriven")
