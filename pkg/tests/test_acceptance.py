"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import random
import time

import pytest

from evasionlab.detectors import (
    build_signature_db, classify_semistatic, extract_features, scan_signatures, taint_run,
)
from evasionlab.emulator import DbState, EnvConfig, run_page, websql_exec
from evasionlab.explorer import explore, force_guards
from evasionlab.js import nodes as n, parse_source, print_ast
from evasionlab.obfuscation import ALL_TECHNIQUES, Technique, verify_equivalence

from conftest import bundle_env

DELEGATED = {Technique.DELEGATED_WEBSQL, Technique.DELEGATED_INDEXEDDB, Technique.DELEGATED_BLOB}


def report(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def test_1_equivalence_suite(capsys, manifest, all_bundles):
    start = time.perf_counter()
    equal = []
    for (sid, tech), b in all_bundles.items():
        r = verify_equivalence(manifest.sample(sid).files, b, bundle_env(b))
        equal.append(r.equal)
    elapsed = time.perf_counter() - start
    ok = len(equal) == 20 and all(equal) and elapsed < 60
    report(capsys, "equivalence", ok, f"{sum(equal)}/{len(equal)} equal in {elapsed:.1f}s")
    assert ok


def test_2_evasion_reproduction(capsys, manifest, all_bundles):
    db = build_signature_db((s.id, s.files) for s in manifest.samples)
    sig_orig = sum(scan_signatures(s.files, db).malicious for s in manifest.samples)
    sig_var = sum(scan_signatures(b.files, db).malicious for b in all_bundles.values())
    semi_orig = sum(classify_semistatic(extract_features(s.files)).malicious for s in manifest.samples)
    semi_var = sum(classify_semistatic(extract_features(b.files)).malicious for b in all_bundles.values())
    ok = sig_orig == 4 and sig_var == 0 and semi_orig >= 4 and semi_var <= 1
    report(capsys, "evasion", ok, f"signature {sig_orig}/4 originals, {sig_var}/20 variants; "
                                  f"semistatic {semi_orig}/4 originals, {semi_var}/20 variants")
    assert ok


def test_3_countermeasure_recovery(capsys, manifest, all_bundles):
    staged = {k: b for k, b in all_bundles.items()
              if b.technique in DELEGATED or b.technique is Technique.DISTRIBUTED}
    flagged = 0
    for b in staged.values():
        flows = taint_run(b.files, EnvConfig(feed=b.feed)).flows
        flagged += any(f.marker_hits for f in flows)
    control_flows = sum(len(taint_run(c.files, EnvConfig(feed=c.feed)).flows) for c in manifest.controls)
    ok = len(staged) == 16 and flagged == 16 and control_flows == 0 and len(manifest.controls) >= 3
    report(capsys, "taint recovery", ok, f"{flagged}/{len(staged)} staged variants flagged, "
                                         f"{control_flows} flows on {len(manifest.controls)} controls")
    assert ok


def test_4_trigger_discovery(capsys, all_bundles):
    found = forced = silent = 0
    tried = []
    for b in (b for b in all_bundles.values() if b.technique is Technique.USER_DRIVEN):
        env = EnvConfig(feed=b.feed)
        r = explore(b.files, env=env)
        found += r.found and r.sequences_tried <= 10_000
        tried.append(r.sequences_tried)
        g = force_guards(b.files, env)
        forced += g.found and len(g.guards_forced) >= 1
        silent += not run_page(b.files, env).sinks
    ok = found == forced == silent == 4
    report(capsys, "trigger discovery", ok, f"explore {found}/4 (sequences {tried}), "
                                            f"forcing {forced}/4, plain runs silent {silent}/4")
    assert ok


def test_5_group_concat_oracle(capsys):
    rng = random.Random(20131)
    alphabet = "abcxyz019 ;,'\"%|\u00e9\u4e2d"
    mismatches = 0
    for _ in range(1000):
        rows = [(rng.randrange(100), "".join(rng.choice(alphabet) for _ in range(rng.randrange(8))))
                for _ in range(rng.randrange(0, 12))]
        sep = rng.choice(["", ",", " | ", "-"])
        db = DbState()
        websql_exec(db, "CREATE TABLE t (id, chunk)")
        for r in rows:
            websql_exec(db, "INSERT INTO t (id, chunk) VALUES (?, ?)", r)
        got = websql_exec(db, f"SELECT GROUP_CONCAT(chunk, '{sep}') AS g FROM t").rows[0]["g"]
        # fold in rowid order, i.e. insertion order
        expected = None
        for _, chunk in rows:
            expected = chunk if expected is None else expected + sep + chunk
        mismatches += got != expected
    report(capsys, "group_concat oracle", mismatches == 0, f"{1000 - mismatches}/1000 insert sets match")
    assert mismatches == 0


def test_6_determinism(capsys, all_bundles):
    unstable = [k for k, b in all_bundles.items()
                if run_page(b.files, bundle_env(b, schedule_seed=3)).trace_hash
                != run_page(b.files, bundle_env(b, schedule_seed=3)).trace_hash]
    b = all_bundles[("A", Technique.DISTRIBUTED.value)]
    traces = [run_page(b.files, bundle_env(b, schedule_seed=seed)) for seed in range(10)]
    sink_traces = {tuple((s.realm, s.code) for s in t.sinks) for t in traces}
    schedules = len({t.trace_hash for t in traces})
    ok = not unstable and len(sink_traces) == 1
    report(capsys, "determinism", ok, f"{len(all_bundles) - len(unstable)}/{len(all_bundles)} bundles "
                                      f"hash-stable; {len(sink_traces)} sink trace(s) over 10 seeds "
                                      f"({schedules} distinct schedules)")
    assert ok


def _roundtrips(src: str) -> bool:
    ast = parse_source(src)
    return parse_source(print_ast(ast)) == ast


def _random_string(rng: random.Random) -> str:
    pools = [
        lambda: chr(rng.randrange(0x20, 0x7F)),
        lambda: rng.choice("\\'\"\n\r\t\b\f\v\0\u2028\u2029"),
        lambda: chr(rng.randrange(0, 0x20)),
        lambda: chr(rng.randrange(0x80, 0xD800)),
        lambda: chr(rng.randrange(0xE000, 0x110000)),
    ]
    return "".join(rng.choice(pools)() for _ in range(rng.randrange(0, 24)))


def test_7_frontend_roundtrip(capsys, manifest, all_bundles):
    sources = [f.body for s in manifest.samples for f in s.files.scripts()]
    sources += [f.body for c in (*manifest.controls, *manifest.carriers) for f in c.files.scripts()]
    sources += [f.body for b in all_bundles.values() for f in b.files.scripts()]
    files_ok = sum(_roundtrips(s) for s in sources)
    rng = random.Random(7)
    strings_ok = 0
    for _ in range(10_000):
        ast = n.Program([n.ExprStmt(n.StringLit(_random_string(rng)))])
        strings_ok += parse_source(print_ast(ast)) == ast
    ok = files_ok == len(sources) and strings_ok == 10_000
    report(capsys, "frontend roundtrip", ok, f"{files_ok}/{len(sources)} files, {strings_ok}/10000 strings")
    assert ok
