/* Notes widget: remembers the last note in local storage. */
var KEY = "last-note";
var previous = localStorage.getItem(KEY);
var note = "Buy milk";
if (previous != null)
    note = previous + "; " + note;
localStorage.setItem(KEY, note);
var count = 0;
var i = 0;
for (i = 0; i < note.length; i++) {
    if (note.charAt(i) == ";")
        count = count + 1;
}
document.write("<p>" + note + " (" + count + " earlier)</p>");
