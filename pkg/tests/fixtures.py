"""Attack-shaped snippets shared by several test modules."""

# heap spray loop: one eval, a hex loop bound, length-driven growth loops
SPRAY_LOOP = """
var PAYLOAD = unescape("%u4141%u4242");
var SPRAYBLOCK = "";
for (var i = 0; i < 0x320; i++) {
    var PADDING = unescape("%u9090%u9090");
    while (PADDING.length < 0x40000) PADDING += PADDING;
    var SINGLE_SPRAYBLOCK = PADDING.substring(0, 100) + PAYLOAD;
    while (SINGLE_SPRAYBLOCK.length < 0x40000) SINGLE_SPRAYBLOCK += SINGLE_SPRAYBLOCK;
    SPRAYBLOCK = SINGLE_SPRAYBLOCK.substring(0, 1000);
    var VARSTR = "var v" + i.toString() + "= '" + SPRAYBLOCK + "';";
    eval(VARSTR);
}
"""

# freed-attribute trigger: three unescape calls
TRIGGER = """
var ATTR = document.createAttribute("FOO");
ATTR.value = "BAR";
var ITER = document.createNodeIterator(ATTR, NodeFilter.SHOW_ALL, {
    acceptNode: function (node) {
        return NodeFilter.FILTER_ACCEPT;
    }
}, false);
ITER.nextNode();
ITER.nextNode();
ITER.previousNode();
ATTR.value = null;
const JUNK = unescape("%u4141%u4141");
var CONTAINER = new Array();
var OBJ = unescape("%u4242%u4242");
while (OBJ.length != 30) OBJ += JUNK;
for (i = 0; i < 64; ++i) CONTAINER.push(unescape(OBJ));
ITER.referenceNode;
"""

# websql reassembly loader: no eval-family string functions besides eval
WEBSQL_LOADER = """
var db = openDatabase("cache", "1.0", "cache", 1048576);
var ws = new WebSocket("ws://127.0.0.1:8080/ws");
ws.onmessage = function (evt) {
    db.transaction(function (tx) {
        tx.executeSql("INSERT INTO Cache (id, chunk) VALUES (?, ?)", [evt.data.id, evt.data.chunk]);
    });
};
ws.onclose = function () {
    db.transaction(function (tx) {
        tx.executeSql('SELECT *, GROUP_CONCAT(chunk, "") AS full FROM Cache', [], function (tx, results) {
            var malicious_code = results.rows.item(0).full;
        }, null);
    });
};
"""
