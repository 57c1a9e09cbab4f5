/* Live comments: messages from the server are cached in a local database. */
var db = openDatabase("comments", "1.0", "comment cache", 1048576);
var rendered = "";
db.transaction(function (tx) {
    tx.executeSql("CREATE TABLE IF NOT EXISTS Comments (id, body)", []);
});
var socket = new WebSocket("ws://127.0.0.1:8080/ws");
socket.onmessage = function (evt) {
    db.transaction(function (tx) {
        tx.executeSql("INSERT INTO Comments (id, body) VALUES (?, ?)", [evt.data.id, evt.data.chunk]);
    });
};
socket.onclose = function () {
    db.transaction(function (tx) {
        tx.executeSql('SELECT GROUP_CONCAT(body, " | ") AS joined FROM Comments', [], function (tx, results) {
            rendered = results.rows.item(0).joined;
            document.write("<div>" + rendered + "</div>");
        }, null);
    });
};
