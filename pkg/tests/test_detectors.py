import json

import pytest
from hypothesis import given, settings, strategies as st

from evasionlab.detectors import (
    FeatureVector, SemistaticConfig, Signature, Verdict, aggregate_verdict, build_signature_db,
    classify_semistatic, extract_features, honeyclient_scan, load_db, save_db, scan_signatures, taint_run,
)
from evasionlab.emulator import EnvConfig
from evasionlab.js import parse_source

from conftest import bundle_env, page
from fixtures import SPRAY_LOOP, TRIGGER, WEBSQL_LOADER


@pytest.fixture(scope="module")
def sig_db(manifest):
    return build_signature_db((s.id, s.files) for s in manifest.samples)


# -- verdicts ------------------------------------------------------------


def test_malicious_verdict_needs_evidence():
    with pytest.raises(ValueError):
        Verdict("x", "s", "malicious")
    with pytest.raises(ValueError):
        Verdict("x", "s", "nasty", ("e",))


def test_aggregate_ratio():
    out = aggregate_verdict([Verdict("a", "s", "malicious", ("e",)), Verdict("b", "s", "benign")])
    assert (out.ratio_text, out.label) == ("1/2", "malicious")
    assert aggregate_verdict([]).label == "undetermined"


# -- features ------------------------------------------------------------


def test_spray_loop_features():
    fv = extract_features(parse_source(SPRAY_LOOP))
    assert fv == FeatureVector(eval_count=1, unescape_count=2, max_string_literal_len=12,
                               max_static_loop_bound=800)
    assert classify_semistatic(fv).label == "malicious"


def test_trigger_features():
    fv = extract_features(parse_source(TRIGGER))
    assert (fv.eval_count, fv.unescape_count, fv.max_static_loop_bound) == (0, 3, 64)


def test_loader_scores_benign():
    fv = extract_features(parse_source(WEBSQL_LOADER))
    verdict = classify_semistatic(fv)
    assert fv.eval_count == 0 and verdict.label == "benign"


def test_long_string_flag():
    fv = extract_features(parse_source(f'var s = "{"A" * 1024}";'))
    assert fv.long_string_flag and fv.max_string_literal_len == 1024


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3), st.booleans())
def test_score_is_weighted_sum(evals, unescapes, writes, long_string):
    cfg = SemistaticConfig()
    fv = FeatureVector(eval_count=evals, unescape_count=unescapes, doc_write_count=writes,
                       max_string_literal_len=2000 if long_string else 5)
    expected = 2 * evals + 2 * unescapes + writes + 3 * long_string
    v = classify_semistatic(fv, cfg)
    assert v.score == expected
    assert v.malicious == (expected >= cfg.threshold)


def test_config_load(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"threshold": 100}))
    assert SemistaticConfig.load(p).threshold == 100


def test_originals_flagged_and_variants_not(manifest, all_bundles):
    for s in manifest.samples:
        assert classify_semistatic(extract_features(s.files)).malicious
    flagged = [k for k, b in all_bundles.items() if classify_semistatic(extract_features(b.files)).malicious]
    assert flagged == []


# -- signatures ----------------------------------------------------------


def test_signature_db_matches_originals(manifest, sig_db):
    assert {s.kind for s in sig_db} == {"literal_substring", "token_sequence"}
    for s in manifest.samples:
        v = scan_signatures(s.files, sig_db, s.id)
        assert v.malicious and v.evidence


def test_signature_db_misses_variants(all_bundles, sig_db):
    assert not [k for k, b in all_bundles.items() if scan_signatures(b.files, sig_db).malicious]


def test_signature_roundtrip(tmp_path, sig_db):
    save_db(sig_db, tmp_path / "db.json")
    assert load_db(tmp_path / "db.json") == sig_db
    assert Signature.from_json(sig_db[0].to_json()) == sig_db[0]


def test_signature_on_controls(manifest, sig_db):
    for c in manifest.controls:
        assert not scan_signatures(c.files, sig_db).malicious


# -- taint ---------------------------------------------------------------


@pytest.mark.parametrize("technique, sources", [
    ("DelegatedWebSQL", {"Network", "StorageDerived"}),
    ("DelegatedIndexedDB", {"Network", "StorageDerived"}),
    ("DelegatedBlob", {"Network", "StorageDerived"}),
    ("Distributed", {"Network", "CrossWorker"}),
])
def test_taint_flows(bundle_of, technique, sources):
    b = bundle_of("A", technique)
    report = taint_run(b.files, EnvConfig(feed=b.feed))
    assert report.malicious
    marked = [f for f in report.flows if f.marker_hits]
    assert marked and sources <= marked[0].sources
    flow = marked[0]
    assert list(flow.path) == sorted(flow.path) and flow.path[-1] == flow.sink_ordinal


def test_websql_flow_passes_through_sql(bundle_of):
    b = bundle_of("C", "DelegatedWebSQL")
    flow = taint_run(b.files, EnvConfig(feed=b.feed)).flows[0]
    assert "executeSql:INSERT" in flow.apis and "executeSql:SELECT" in flow.apis


def test_taint_on_controls_is_clean(manifest):
    assert len(manifest.controls) >= 3
    for c in manifest.controls:
        env = EnvConfig(feed=c.feed) if c.feed else EnvConfig()
        assert taint_run(c.files, env).flows == []


def test_originals_have_no_tainted_flows(manifest):
    for s in manifest.samples:
        assert not taint_run(s.files).malicious


def test_taint_needs_html5():
    with pytest.raises(ValueError):
        taint_run(page("1;"), EnvConfig(html5=False))


# -- honeyclient ---------------------------------------------------------


def test_honeyclient_flags_original_via_dynamic_features(manifest):
    v = honeyclient_scan(manifest.sample("D").files, sample_id="D")
    assert v.malicious and v.detector == "honeyclient"


def test_honeyclient_without_html5_misses_delegated(bundle_of):
    b = bundle_of("A", "DelegatedIndexedDB")
    assert not honeyclient_scan(b.files, EnvConfig(feed=b.feed)).malicious
    assert honeyclient_scan(b.files, EnvConfig(feed=b.feed), html5=True).malicious


def test_honeyclient_html5_misses_user_driven(bundle_of):
    b = bundle_of("A", "UserDriven")
    assert not honeyclient_scan(b.files, EnvConfig(feed=b.feed), html5=True).malicious
    assert honeyclient_scan(b.files, bundle_env(b), html5=True).malicious
