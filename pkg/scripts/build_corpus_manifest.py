"""Regenerate corpus/manifest.json, computing region spans from the sentinel comments."""

import json

from evasionlab.harness.corpus import CORPUS_DIR, DEFAULT_MANIFEST, load_manifest, region_from_sentinels

SAMPLES = [
    ("A", "EVLAB-MARKER-A7F3", "Attribute-iterator use-after-free structure: payload, eight-block heap spray, freed attribute reused"),
    ("B", "EVLAB-MARKER-B2C9", "Aurora-style structure: sprayed memory array, eval of the last block, freed element"),
    ("C", "EVLAB-MARKER-C5D1", "Font-tag structure: joined eval, document.write of a sprayed face name, repeated eval"),
    ("D", "EVLAB-MARKER-D8E6", "CSS clip structure: percent-decoded tag appended to sprayed slices, one eval"),
]
CONTROLS = [
    ("storage_notes", [("page.js", "page", "controls/storage_notes/page.js")], None,
     "Local storage read and write, no eval"),
    ("websql_feed", [("page.js", "page", "controls/websql_feed/page.js")], "controls/websql_feed/feed.json",
     "WebSocket comments cached in WebSQL and joined with GROUP_CONCAT, no eval"),
    ("eval_const", [("page.js", "page", "controls/eval_const/page.js")], None,
     "eval of a constant expression"),
    ("worker_sum", [("page.js", "page", "controls/worker_sum/page.js"),
                    ("sum.js", "worker", "controls/worker_sum/sum.js")], None,
     "Worker messaging with IndexedDB and Blob caching, no eval"),
]


def files(entries):
    return [{"id": fid, "role": role, "path": path} for fid, role, path in entries]


def main() -> None:
    manifest = {"samples": [], "controls": [], "carriers": []}
    for sid, marker, desc in SAMPLES:
        rel = f"samples/{sid}/page.js"
        manifest["samples"].append({
            "id": sid,
            "description": desc,
            "files": files([("page.js", "page", rel)]),
            "region": region_from_sentinels(CORPUS_DIR, rel, "page.js"),
            "marker": marker,
            "required_event_trace": [],
        })
    for cid, entries, feed, desc in CONTROLS:
        entry = {"id": cid, "description": desc, "files": files(entries)}
        if feed:
            entry["feed"] = feed
        manifest["controls"].append(entry)
    manifest["carriers"].append({
        "id": "snake",
        "description": "Snake game: keydown steers, a synthetic food event scores",
        "files": files([("page.js", "page", "carriers/snake/page.js")]),
    })
    DEFAULT_MANIFEST.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    loaded = load_manifest(DEFAULT_MANIFEST)
    print(f"wrote {DEFAULT_MANIFEST}: {len(loaded.samples)} samples, {len(loaded.controls)} controls")


if __name__ == "__main__":
    main()
