/* Offloads a sum to a worker and caches the result in IndexedDB and a Blob. */
var total = 0;
var summary = "";
var store = null;
var request = indexedDB.open("results", 1);
request.onupgradeneeded = function (e) {
    e.target.result.createObjectStore("sums", {keyPath: "id"});
};
request.onsuccess = function (e) {
    store = e.target.result.transaction(["sums"], "readwrite").objectStore("sums");
};
var worker = new Worker("sum.js");
worker.onmessage = function (evt) {
    total = evt.data.total;
    store.put({"id": 1, "label": evt.data.label});
    var bb = new BlobBuilder();
    bb.append(evt.data.label);
    var fr = new FileReader();
    fr.onload = function (e) {
        summary = e.target.result;
    };
    fr.readAsText(bb.getBlob());
};
worker.postMessage({"values": [1, 2, 3, 4]});
