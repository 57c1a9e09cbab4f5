import pytest

from evasionlab.emulator import EnvConfig, EventDescriptor, run_page
from evasionlab.explorer import (
    EventAlphabet, ExplorationBudget, discover_alphabet, enumerate_sequences, explore, force_guards,
    handler_written_globals,
)
from evasionlab.js import parse_source

from conftest import page

GATED = """
var armed = 0;
function onKey(e) {
    var local = 1;
    if (e.which == 13) { armed = armed + 1; }
}
function onClick(e) {
    if (armed >= 2) { eval("EVLAB-MARKER-TEST1"); }
}
document.addEventListener("keydown", onKey, false);
document.addEventListener("click", onClick, false);
"""


def test_alphabet_from_listeners_and_compared_keys():
    alpha = discover_alphabet(page(GATED))
    assert alpha.kinds() == ["click", "keydown"]
    assert EventDescriptor.of("keydown", which=13) in alpha.events


def test_alphabet_of_snake_carrier(carrier):
    alpha = discover_alphabet(carrier)
    assert "food" in alpha.kinds()
    keys = sorted(dict(e.payload)["which"] for e in alpha.events if e.kind == "keydown")
    assert keys == [37, 38, 39, 40, 65, 68, 83, 87]


def test_enumeration_order_and_count():
    a, b = EventDescriptor.of("a"), EventDescriptor.of("b")
    seqs = list(enumerate_sequences(EventAlphabet((b, a)), 2))
    assert seqs[0] == () and seqs[1:3] == [(a,), (b,)]
    assert len(seqs) == 1 + 2 + 4


def test_explore_finds_gated_eval():
    report = explore(page(GATED))
    assert report.found
    kinds = [e.kind for e in report.triggering_trace]
    assert kinds == ["keydown", "keydown", "click"]


def test_explore_respects_sequence_budget():
    report = explore(page(GATED), ExplorationBudget(max_sequences=3))
    assert not report.found and report.sequences_tried == 3


def test_budget_validation():
    with pytest.raises(ValueError):
        ExplorationBudget(max_sequences=0)


def test_handler_written_globals_skip_locals():
    assert handler_written_globals([parse_source(GATED)]) == {"armed"}


def test_force_guards_reaches_gated_eval():
    assert not run_page(page(GATED)).sinks
    report = force_guards(page(GATED))
    assert report.found and report.guards_forced


@pytest.mark.parametrize("sid", ["A", "B", "C", "D"])
def test_explore_user_driven_variants(bundle_of, sid):
    b = bundle_of(sid, "UserDriven")
    report = explore(b.files, env=EnvConfig(feed=b.feed))
    assert report.found and report.sequences_tried <= 10_000
    assert [e.kind for e in report.triggering_trace] == ["keydown", "food"]


def test_force_guards_on_user_driven(bundle_of):
    b = bundle_of("D", "UserDriven")
    report = force_guards(b.files, EnvConfig(feed=b.feed))
    assert report.found and len(report.guards_forced) >= 1


def test_report_json_shape(bundle_of):
    b = bundle_of("D", "UserDriven")
    data = explore(b.files, env=EnvConfig(feed=b.feed)).to_json()
    assert data["mode"] == "enumerate" and data["triggering_trace"][1]["kind"] == "food"
