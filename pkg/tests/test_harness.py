import csv
import io
import json
import shutil

import pytest

from evasionlab.harness import (
    DETECTORS, ManifestError, RunConfig, RunResults, load_manifest, render_report, run_matrix,
)
from evasionlab.harness.cli import main
from evasionlab.emulator import run_page
from evasionlab.harness.corpus import CORPUS_DIR


@pytest.fixture(scope="module")
def results(manifest):
    return run_matrix(manifest, RunConfig(generated_at="fixed"))


@pytest.fixture
def corpus_copy(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(CORPUS_DIR, root)
    return root


def _edit(root, fn):
    path = root / "manifest.json"
    data = json.loads(path.read_text())
    fn(data)
    path.write_text(json.dumps(data))
    return path


# -- manifest ------------------------------------------------------------


def test_manifest_contents(manifest):
    assert [s.id for s in manifest.samples] == ["A", "B", "C", "D"]
    assert len(manifest.controls) >= 3 and manifest.carrier().id == "snake"
    for s in manifest.samples:
        assert s.region_text.startswith("/* @malicious-begin */")
        # the marker is encoded in the source and only appears once decoded
        assert s.marker not in s.host_body
        assert any(s.marker in code for code in run_page(s.files).sink_codes())


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["samples"][0].pop("marker"), "samples[0]"),
    (lambda d: d["samples"][1].update(id="A"), "manifest.entries"),
    (lambda d: d["samples"][0]["files"][0].update(path="samples/A/missing.js"), "samples[0]"),
    (lambda d: d["samples"][0]["files"][0].update(role="style"), "samples[0]"),
    (lambda d: d["samples"][0]["region"].update(end=10**6), "samples[0]"),
    (lambda d: d["samples"][2].update(marker=d["samples"][0]["marker"]), "samples[2].marker"),
])
def test_manifest_errors_name_the_field(corpus_copy, mutate, where):
    path = _edit(corpus_copy, mutate)
    with pytest.raises(ManifestError) as exc:
        load_manifest(path)
    assert exc.value.path.startswith(where)


def test_unparseable_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("{nope")
    with pytest.raises(ManifestError):
        load_manifest(p)


# -- matrix and reports --------------------------------------------------


def test_matrix_shape(results):
    assert len(results.rows) == 24 * len(DETECTORS)
    assert not results.failures
    assert all(r.status == "ok" for r in results.rows)
    keys = [(r.sample, r.variant, r.detector) for r in results.rows]
    assert len(set(keys)) == len(keys)
    assert [r.variant for r in results.rows[:len(DETECTORS)]] == ["original"] * len(DETECTORS)


def test_matrix_summary(results):
    s = results.summary()
    assert s["signature"] == {"originals": "4/4", "variants": "0/20"}
    assert s["semistatic"] == {"originals": "4/4", "variants": "0/20"}
    assert s["taint"]["variants"] == "16/20"
    assert s["trigger"]["variants"] == "20/20"


def test_report_formats(results):
    data = json.loads(render_report(results, "json"))
    assert data["generated_at"] == "fixed" and len(data["rows"]) == len(results.rows)
    rows = list(csv.DictReader(io.StringIO(render_report(results, "csv"))))
    assert len(rows) == len(results.rows) and rows[0]["detector"]
    md = render_report(results, "markdown")
    assert "| signature |" in md or "signature" in md
    with pytest.raises(ValueError):
        render_report(results, "xml")


def test_results_roundtrip(tmp_path, results):
    p = tmp_path / "r.json"
    p.write_text(render_report(results, "json"))
    again = RunResults.load(p)
    assert again.rows == results.rows and again.config == results.config


def test_matrix_json_is_byte_identical(manifest, results):
    again = run_matrix(manifest, RunConfig(generated_at="fixed"))
    assert render_report(again, "json") == render_report(results, "json")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(detectors=())
    with pytest.raises(ValueError):
        RunConfig(detectors=("oracle",))
    with pytest.raises(ValueError):
        RunConfig(techniques=("Teleport",))


# -- command line --------------------------------------------------------


def test_cli_obfuscate_run_detect_explore(tmp_path, capsys):
    out = tmp_path / "b"
    assert main(["obfuscate", "D", "--technique", "UserDriven", "--out", str(out)]) == 0
    assert (out / "bundle.json").exists()
    capsys.readouterr()
    assert main(["run", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    # the staging eval of the rebuilt region plus the sample's own eval
    assert summary["termination"] == "completed" and summary["sink_count"] == 2
    assert main(["detect", str(out), "--detectors", "signature,taint"]) == 0
    assert json.loads(capsys.readouterr().out)["ratio"] == "0/2"
    assert main(["explore", str(out), "--out", str(tmp_path / "x.json")]) == 0
    assert json.loads((tmp_path / "x.json").read_text())["triggering_trace"]


def test_cli_run_trace_file(tmp_path, capsys):
    script = tmp_path / "p.js"
    script.write_text('eval("1");')
    assert main(["run", str(script), "--out", str(tmp_path / "t.jsonl")]) == 0
    lines = (tmp_path / "t.jsonl").read_text().splitlines()
    assert json.loads(lines[-1])["type"] == "summary"


def test_cli_exit_codes(tmp_path, corpus_copy, capsys):
    assert main(["run", str(tmp_path / "nothing")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    bad = _edit(corpus_copy, lambda d: d["samples"][0].pop("region"))
    assert main(["obfuscate", "A", "--technique", "Distributed", "--manifest", str(bad),
                 "--out", str(tmp_path / "o")]) == 2
    assert main(["obfuscate", "A", "--technique", "Nope", "--out", str(tmp_path / "o")]) == 3


def test_cli_matrix_and_report(tmp_path, capsys):
    out = tmp_path / "m"
    assert main(["matrix", "--detectors", "signature,semistatic", "--out", str(out), "--format", "csv"]) == 0
    assert (out / "results.json").exists() and (out / "report.csv").exists()
    assert main(["report", str(out / "results.json"), "--format", "markdown"]) == 0
    assert "semistatic" in capsys.readouterr().out


def test_cli_ast(tmp_path, capsys):
    script = tmp_path / "p.js"
    script.write_text("var x = 0x10;")
    assert main(["ast", str(script), "--json"]) == 0
    assert "VarDecl" in capsys.readouterr().out
