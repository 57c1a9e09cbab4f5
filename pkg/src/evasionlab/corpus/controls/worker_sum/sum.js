onmessage = function (evt) {
    var values = evt.data.values;
    var s = 0;
    for (var i = 0; i < values.length; i++)
        s = s + values[i];
    postMessage({"total": s, "label": "sum=" + s});
};
