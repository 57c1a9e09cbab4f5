"""Host objects installed into realms.

The DOM is modelled only as far as the corpus needs: events, a few inert
node APIs and generic stand-ins for everything else.  HTML5 objects
(storage, WebSQL, IndexedDB, Blob, Worker, WebSocket) exist only when
``EnvConfig.html5`` is set.
"""

from __future__ import annotations

import math
import random
import re
import urllib.parse
from typing import TYPE_CHECKING, Any, Callable

from .errors import MalformedEscape, SqlError
from .storage import IdbDatabase, StoreState, blob_concat, key_order
from .taint import NETWORK, STORAGE_DERIVED, TaintLabel, new_label, tag, taint_of
from .values import (
    UNDEFINED, HostFunction, HostObject, InertObject, JSArray, JSObject, add_label,
    from_python, map_strings, structured_clone, to_boolean, to_int32, to_number, to_string,
)
from .websql import DbState, websql_exec

if TYPE_CHECKING:
    from .runtime import Emulator, Realm

_HEX = set("0123456789abcdefABCDEF")


def unescape(s: str) -> str:
    """Decode ``%XX`` and ``%uXXXX`` escapes; other characters pass through.

    Raises MalformedEscape on a truncated or non-hex escape.
    """
    raw = str.__str__(s)
    out: list[str] = []
    i, size = 0, len(raw)
    while i < size:
        c = raw[i]
        if c != "%":
            j = raw.find("%", i)
            j = size if j < 0 else j
            out.append(raw[i:j])
            i = j
            continue
        if i + 1 < size and raw[i + 1] == "u":
            digits = raw[i + 2:i + 6]
            if len(digits) < 4 or not set(digits) <= _HEX:
                raise MalformedEscape(f"bad %u escape at offset {i}")
            out.append(chr(int(digits, 16)))
            i += 6
        else:
            digits = raw[i + 1:i + 3]
            if len(digits) < 2 or not set(digits) <= _HEX:
                raise MalformedEscape(f"bad % escape at offset {i}")
            out.append(chr(int(digits, 16)))
            i += 3
    return tag("".join(out), taint_of(s))


def escape(s: str) -> str:
    safe = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789@*_+-./")
    out = []
    for c in str.__str__(s):
        if c in safe:
            out.append(c)
        elif ord(c) < 256:
            out.append(f"%{ord(c):02X}")
        else:
            out.append(f"%u{ord(c):04X}")
    return tag("".join(out), taint_of(s))


def _arg(args: list, i: int) -> Any:
    return args[i] if i < len(args) else UNDEFINED


def _fn(name: str, impl: Callable[[list], Any]) -> HostFunction:
    return HostFunction(name, lambda interp, this, args: impl(args))


def _parse_int(args: list) -> float:
    s = str.__str__(to_string(_arg(args, 0))).strip()
    radix = to_int32(_arg(args, 1))
    sign = 1
    if s[:1] in "+-" and s:
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    if radix == 0:
        radix = 10
        if s[:2].lower() == "0x":
            radix, s = 16, s[2:]
    elif radix == 16 and s[:2].lower() == "0x":
        s = s[2:]
    if not 2 <= radix <= 36:
        return math.nan
    digits = ""
    for c in s:
        v = int(c, 36) if c.isalnum() and c.isascii() else 99
        if v >= radix:
            break
        digits += c
    return float(sign * int(digits, radix)) if digits else math.nan


def _parse_float(args: list) -> float:
    s = str.__str__(to_string(_arg(args, 0))).strip()
    m = re.match(r"[+-]?(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|Infinity)", s)
    if not m:
        return math.nan
    return float(m.group().replace("Infinity", "inf"))


def install(emu: "Emulator", realm: "Realm") -> None:
    g = realm.scope.vars
    interp = emu.interp
    rng = random.Random(realm.rng_seed)

    def record(api: str, args: list = ()) -> int:
        return emu.host_call(api, list(args))

    def script_error(kind: str, message: str):
        return interp.error(kind, message)

    # -- language globals ------------------------------------------------

    g["undefined"] = UNDEFINED
    g["NaN"] = math.nan
    g["Infinity"] = math.inf
    g["eval"] = interp.eval_builtin

    def js_unescape(args):
        try:
            return unescape(to_string(_arg(args, 0)))
        except MalformedEscape as exc:
            raise script_error("MalformedEscape", str(exc)) from None

    g["unescape"] = _fn("unescape", js_unescape)
    g["escape"] = _fn("escape", lambda args: escape(to_string(_arg(args, 0))))

    def uri_decoder(name: str):
        def decode(args):
            s = to_string(_arg(args, 0))
            try:
                out = urllib.parse.unquote(str.__str__(s), errors="strict")
            except UnicodeDecodeError:
                raise script_error("URIError", "malformed URI sequence") from None
            return tag(out, taint_of(s))
        return _fn(name, decode)

    g["decodeURIComponent"] = uri_decoder("decodeURIComponent")
    g["decodeURI"] = uri_decoder("decodeURI")
    g["encodeURIComponent"] = _fn(
        "encodeURIComponent",
        lambda args: urllib.parse.quote(str.__str__(to_string(_arg(args, 0))), safe="-_.!~*'()"),
    )
    g["parseInt"] = _fn("parseInt", _parse_int)
    g["parseFloat"] = _fn("parseFloat", _parse_float)
    g["isNaN"] = _fn("isNaN", lambda args: to_number(_arg(args, 0)) != to_number(_arg(args, 0)))

    def from_char_code(args):
        return "".join(chr(to_int32(a) & 0xFFFF) for a in args)

    g["String"] = HostFunction(
        "String",
        lambda i, t, args: to_string(_arg(args, 0)) if args else "",
        None,
    )
    g["String"].props["fromCharCode"] = _fn("String.fromCharCode", from_char_code)
    g["Number"] = _fn("Number", lambda args: to_number(_arg(args, 0)) if args else 0.0)
    g["Boolean"] = _fn("Boolean", lambda args: to_boolean(_arg(args, 0)))

    def make_array(args):
        if len(args) == 1 and isinstance(args[0], float):
            size = int(args[0])
            if size < 0 or size != args[0]:
                raise script_error("RangeError", "invalid array length")
            interp.check_string_len(size)
            return JSArray([UNDEFINED] * size)
        return JSArray(list(args))

    g["Array"] = HostFunction("Array", lambda i, t, args: make_array(args), lambda i, args: make_array(args))
    g["Object"] = HostFunction("Object", lambda i, t, args: JSObject(), lambda i, args: JSObject())

    def math_fn(name: str, f: Callable[..., float]) -> HostFunction:
        return _fn(f"Math.{name}", lambda args: float(f(*[to_number(a) for a in args])))

    def _safe(f):
        def wrapped(*xs):
            try:
                return f(*xs)
            except (ValueError, OverflowError):
                return math.nan
        return wrapped

    g["Math"] = JSObject({
        "random": _fn("Math.random", lambda args: rng.random()),
        "floor": math_fn("floor", _safe(lambda x=math.nan: math.floor(x))),
        "ceil": math_fn("ceil", _safe(lambda x=math.nan: math.ceil(x))),
        "round": math_fn("round", _safe(lambda x=math.nan: math.floor(x + 0.5))),
        "abs": math_fn("abs", lambda x=math.nan: abs(x)),
        "min": math_fn("min", lambda *xs: min(xs) if xs else math.inf),
        "max": math_fn("max", lambda *xs: max(xs) if xs else -math.inf),
        "pow": math_fn("pow", _safe(lambda x=math.nan, y=math.nan: math.pow(x, y))),
        "sqrt": math_fn("sqrt", _safe(lambda x=math.nan: math.sqrt(x))),
        "PI": math.pi,
    }, "Math")

    g["console"] = JSObject({
        "log": HostFunction("console.log", lambda i, t, args: (record("console.log", args), UNDEFINED)[1]),
    }, "Console")

    def set_timeout(args):
        fn = _arg(args, 0)
        delay = to_number(_arg(args, 1)) if len(args) > 1 else 0.0
        delay = 0.0 if delay != delay else delay
        extra = list(args[2:])
        current = emu.current

        def fire() -> None:
            if isinstance(fn, str):
                interp.direct_eval(fn, current.scope, "setTimeout")
            else:
                emu.call_handler(fn, extra)

        return float(emu.scheduler.set_timer(current.id, fire, delay))

    g["setTimeout"] = _fn("setTimeout", set_timeout)
    g["clearTimeout"] = _fn("clearTimeout", lambda args: (emu.scheduler.clear_timer(int(to_number(_arg(args, 0)) or 0)), UNDEFINED)[1])
    g["navigator"] = JSObject({"userAgent": "Mozilla/5.0 (evasionlab)", "platform": "emulated"}, "Navigator")

    if realm.kind == "page":
        _install_document(emu, realm, record)
    else:
        _install_worker_scope(emu, realm)

    if emu.env.html5:
        _install_html5(emu, realm, record)


# -- page: document and friends ---------------------------------------------


def _install_document(emu: "Emulator", realm: "Realm", record: Callable) -> None:
    g = realm.scope.vars
    interp = emu.interp

    def on_prop_set(target: str):
        def on_set(key: str, value: Any) -> None:
            if key.startswith("on") and len(key) > 2 and value is not UNDEFINED and value is not None:
                emu.add_listener(realm, key[2:], value, target, "property")
        return on_set

    def add_listener(target: str):
        def add(interp_, this, args):
            kind = str.__str__(to_string(_arg(args, 0)))
            emu.add_listener(realm, kind, _arg(args, 1), target, "addEventListener")
            return UNDEFINED
        return HostFunction(f"{target}.addEventListener", add)

    def remove_listener(args):
        emu.remove_listener(realm, str.__str__(to_string(_arg(args, 0))), _arg(args, 1))
        return UNDEFINED

    def create_event(args):
        record("document.createEvent", args)
        ev = JSObject({"type": ""}, "Event")

        def init_event(a):
            ev.props["type"] = str.__str__(to_string(_arg(a, 0)))
            return UNDEFINED

        ev.props["initEvent"] = _fn("Event.initEvent", init_event)
        noop = _fn("Event.preventDefault", lambda a: UNDEFINED)
        ev.props["preventDefault"] = noop
        ev.props["stopPropagation"] = noop
        return ev

    def dispatch(args):
        ev = _arg(args, 0)
        if not isinstance(ev, JSObject):
            raise interp.error("TypeError", "dispatchEvent expects an event")
        kind = str.__str__(to_string(ev.get("type")))
        emu.dispatch_event(realm, kind, ev, "script")
        return True

    def create_attribute(args):
        record("document.createAttribute", args)
        return JSObject({"name": to_string(_arg(args, 0)), "value": ""}, "Attr")

    def create_node_iterator(args):
        record("document.createNodeIterator", args[:2])

        def step(name):
            def f(a):
                record(f"NodeIterator.{name}")
                return None
            return _fn(f"NodeIterator.{name}", f)

        return HostObject("NodeIterator", {
            "nextNode": step("nextNode"),
            "previousNode": step("previousNode"),
            "detach": step("detach"),
            "referenceNode": _arg(args, 0),
            "root": _arg(args, 0),
        })

    written: list[str] = []

    def write(name: str):
        def f(args):
            text = "".join(str.__str__(to_string(a)) for a in args)
            written.append(text)
            record(f"document.{name}", [text])
            return UNDEFINED
        return _fn(f"document.{name}", f)

    def element(label: str):
        def f(args):
            record(label, args)
            return InertObject(f"{label}({to_string(_arg(args, 0))})", record)
        return _fn(label, f)

    doc = HostObject("Document", on_set=on_prop_set("document"))
    doc.props.update({
        "addEventListener": add_listener("document"),
        "removeEventListener": _fn("document.removeEventListener", remove_listener),
        "createEvent": _fn("document.createEvent", create_event),
        "createEventObject": _fn("document.createEventObject", create_event),
        "dispatchEvent": _fn("document.dispatchEvent", dispatch),
        "createAttribute": _fn("document.createAttribute", create_attribute),
        "createNodeIterator": _fn("document.createNodeIterator", create_node_iterator),
        "write": write("write"),
        "writeln": write("writeln"),
        "getElementById": element("document.getElementById"),
        "createElement": element("document.createElement"),
        "querySelector": element("document.querySelector"),
        "body": InertObject("document.body", record),
    })
    realm.document = doc
    g["document"] = doc

    win = HostObject("Window", on_set=on_prop_set("window"))
    win.props.update({
        "addEventListener": add_listener("window"),
        "removeEventListener": _fn("window.removeEventListener", remove_listener),
        "document": doc,
        "location": InertObject("location", record),
        "setTimeout": g["setTimeout"],
        "eval": interp.eval_builtin,
        "navigator": g["navigator"],
    })
    g["window"] = win
    g["alert"] = _fn("alert", lambda args: (record("alert", args), UNDEFINED)[1])
    g["$"] = _fn("$", lambda args: InertObject(f"$({to_string(_arg(args, 0))})", record))
    g["NodeFilter"] = JSObject({
        "SHOW_ALL": float(0xFFFFFFFF),
        "SHOW_ELEMENT": 1.0,
        "FILTER_ACCEPT": 1.0,
        "FILTER_REJECT": 2.0,
        "FILTER_SKIP": 3.0,
    }, "NodeFilter")


def _install_worker_scope(emu: "Emulator", realm: "Realm") -> None:
    g = realm.scope.vars

    def post(interp, this, args):
        emu.deliver_message(realm.id, realm.parent, _arg(args, 0))
        return UNDEFINED

    g["postMessage"] = HostFunction("postMessage", post)
    g["onmessage"] = None
    g["close"] = _fn("close", lambda args: UNDEFINED)


# -- HTML5 -------------------------------------------------------------------


def _install_html5(emu: "Emulator", realm: "Realm", record: Callable) -> None:
    g = realm.scope.vars
    interp = emu.interp
    policy = emu.policy

    def note_write(value: Any, api: str, ordinal: int) -> Any:
        """Record a storage write on tainted strings (origin note only)."""
        def f(s: str) -> str:
            t = taint_of(s)
            if t is None:
                return s
            return tag(s, TaintLabel(t.sources, tuple(sorted(set(t.origins) | {(api, ordinal)}, key=lambda o: (o[1], o[0])))))
        return map_strings(value, f)

    def storage_read(value: Any, api: str, ordinal: int) -> Any:
        """Reads of tainted writes become StorageDerived."""
        if not policy.storage:
            return value
        label = new_label(STORAGE_DERIVED, api, ordinal)

        def f(s: str) -> str:
            return s if taint_of(s) is None else add_label(s, label)
        return map_strings(value, f)

    # -- Local Storage (page only) ---------------------------------------

    if realm.kind == "page":
        local = emu.origin.local

        def set_item(args):
            o = record("localStorage.setItem", args)
            local.set(str.__str__(to_string(_arg(args, 0))), note_write(to_string(_arg(args, 1)), "localStorage.setItem", o))
            return UNDEFINED

        def get_item(args):
            o = record("localStorage.getItem", args)
            v = local.get(str.__str__(to_string(_arg(args, 0))))
            return None if v is None else storage_read(v, "localStorage.getItem", o)

        def remove_item(args):
            record("localStorage.removeItem", args)
            local.remove(str.__str__(to_string(_arg(args, 0))))
            return UNDEFINED

        def clear(args):
            record("localStorage.clear")
            local.items.clear()
            return UNDEFINED

        g["localStorage"] = HostObject(
            "Storage",
            {
                "setItem": _fn("localStorage.setItem", set_item),
                "getItem": _fn("localStorage.getItem", get_item),
                "removeItem": _fn("localStorage.removeItem", remove_item),
                "clear": _fn("localStorage.clear", clear),
                "key": _fn("localStorage.key", lambda args: local.key(int(to_number(_arg(args, 0))))),
            },
            getters={"length": lambda: float(len(local.items))},
        )

    # -- WebSQL ----------------------------------------------------------

    def open_database(args):
        name = str.__str__(to_string(_arg(args, 0)))
        record("openDatabase", args[:2])
        state = emu.origin.sql.setdefault(name, DbState())

        def make_tx():
            def execute_sql(a):
                sql = str.__str__(to_string(_arg(a, 0)))
                params_v = _arg(a, 1)
                params = list(params_v.items) if isinstance(params_v, JSArray) else []
                success, failure = _arg(a, 2), _arg(a, 3)
                o = record("executeSql", [sql] + params)
                verb = sql.strip().split(None, 1)[0].upper() if sql.strip() else ""
                api = f"executeSql:{verb}"
                try:
                    result = websql_exec(state, sql, [note_write(p, api, o) for p in params])
                except SqlError as exc:
                    err = JSObject({"message": f"{type(exc).__name__}: {exc}", "code": 5.0}, "SQLError")
                    if failure is UNDEFINED or failure is None:
                        emu.record_error(interp.error(type(exc).__name__, str(exc)))
                    else:
                        emu.enqueue(realm, lambda: emu.call_handler(failure, [tx, err]), "sql error")
                    return UNDEFINED
                rows = [storage_read(from_python_row(r), api, o) for r in result.rows]
                results = JSObject({
                    "rows": JSObject({
                        "length": float(len(rows)),
                        "item": _fn("SQLResultSetRowList.item", lambda b: rows[int(to_number(_arg(b, 0)))]
                                    if 0 <= to_number(_arg(b, 0)) < len(rows) else None),
                    }, "SQLResultSetRowList"),
                    "rowsAffected": float(result.rows_affected),
                    "insertId": float(result.insert_id) if result.insert_id is not None else UNDEFINED,
                }, "SQLResultSet")
                if success is not UNDEFINED and success is not None:
                    emu.enqueue(realm, lambda: emu.call_handler(success, [tx, results]), "sql result")
                return UNDEFINED

            tx = JSObject({"executeSql": _fn("executeSql", execute_sql)}, "SQLTransaction")
            return tx

        def transaction(a):
            cb = _arg(a, 0)
            record("Database.transaction")
            emu.enqueue(realm, lambda: emu.call_handler(cb, [make_tx()]), "sql transaction")
            return UNDEFINED

        return JSObject({
            "transaction": _fn("Database.transaction", transaction),
            "readTransaction": _fn("Database.readTransaction", transaction),
        }, "Database")

    def from_python_row(row: dict) -> JSObject:
        return JSObject({k: (UNDEFINED if v is UNDEFINED else v) for k, v in row.items()}, "Row")

    g["openDatabase"] = _fn("openDatabase", open_database)

    # -- IndexedDB -------------------------------------------------------

    def idb_request(label: str) -> HostObject:
        return HostObject(label, {"result": UNDEFINED, "onsuccess": None, "onerror": None})

    def fire(req: HostObject, handler: str, **extra: Any) -> None:
        evt = JSObject({"target": req, "type": handler[2:], **extra}, "Event")
        emu.call_handler(req.get(handler), [evt])

    def store_object(store: StoreState) -> HostObject:
        def add(method: str):
            def f(a):
                value, key = _arg(a, 0), _arg(a, 1)
                o = record(f"IDBObjectStore.{method}", a)
                try:
                    stored = note_write(structured_clone(value), f"IDBObjectStore.{method}", o)
                except Exception as exc:
                    raise interp.error("DataCloneError", str(exc)) from None
                if store.key_path is not None:
                    key = stored.get(store.key_path) if isinstance(stored, JSObject) else UNDEFINED
                    if key is UNDEFINED:
                        raise interp.error("DataError", f"missing key path {store.key_path}")
                req = idb_request("IDBRequest")
                try:
                    if method == "add":
                        k = store.add(stored, None if key is UNDEFINED else key)
                    else:
                        k = store.put(stored, key)
                except KeyError as exc:
                    req.props["error"] = str(exc)
                    emu.enqueue(realm, lambda: fire(req, "onerror"), "idb error")
                    return req
                req.props["result"] = k
                emu.enqueue(realm, lambda: fire(req, "onsuccess"), "idb add")
                return req
            return f

        def get(a):
            o = record("IDBObjectStore.get", a)
            req = idb_request("IDBRequest")
            rec = store.records.get(key_order(_arg(a, 0)))

            def run():
                req.props["result"] = UNDEFINED if rec is None else storage_read(structured_clone(rec[1]), "IDBObjectStore.get", o)
                fire(req, "onsuccess")
            emu.enqueue(realm, run, "idb get")
            return req

        def open_cursor(a):
            record("IDBObjectStore.openCursor")
            req = idb_request("IDBRequest")
            state = {"last": None}

            def step():
                keys = sorted(store.records)
                nxt = [k for k in keys if state["last"] is None or k > state["last"]]
                if not nxt:
                    req.props["result"] = None
                    fire(req, "onsuccess")
                    return
                k = nxt[0]
                state["last"] = k
                key, value = store.records[k]
                o = record("IDBCursor.value", [key])
                cursor = JSObject({
                    "key": key,
                    "primaryKey": key,
                    "value": storage_read(structured_clone(value), "IDBCursor.value", o),
                }, "IDBCursorWithValue")
                advanced = {"done": False}

                def cont(b):
                    if advanced["done"]:
                        raise interp.error("InvalidStateError", "cursor already advanced")
                    advanced["done"] = True
                    emu.enqueue(realm, step, "idb cursor")
                    return UNDEFINED

                cursor.props["continue"] = _fn("IDBCursor.continue", cont)
                req.props["result"] = cursor
                fire(req, "onsuccess")

            emu.enqueue(realm, step, "idb cursor")
            return req

        def count(a):
            req = idb_request("IDBRequest")
            req.props["result"] = float(len(store.records))
            emu.enqueue(realm, lambda: fire(req, "onsuccess"), "idb count")
            return req

        return HostObject("IDBObjectStore", {
            "name": store.name,
            "keyPath": store.key_path,
            "add": _fn("IDBObjectStore.add", add("add")),
            "put": _fn("IDBObjectStore.put", add("put")),
            "get": _fn("IDBObjectStore.get", get),
            "openCursor": _fn("IDBObjectStore.openCursor", open_cursor),
            "count": _fn("IDBObjectStore.count", count),
        })

    def database_object(db: IdbDatabase) -> HostObject:
        stores: dict[str, HostObject] = {}

        def store_handle(name: str) -> HostObject:
            if name not in db.stores:
                raise interp.error("NotFoundError", f"no object store {name!r}")
            if name not in stores:
                stores[name] = store_object(db.stores[name])
            return stores[name]

        def create_store(a):
            name = str.__str__(to_string(_arg(a, 0)))
            record("IDBDatabase.createObjectStore", a)
            opts = _arg(a, 1)
            key_path = None
            if isinstance(opts, JSObject):
                kp = opts.get("keyPath")
                key_path = None if kp is UNDEFINED or kp is None else str.__str__(to_string(kp))
            if name in db.stores:
                raise interp.error("ConstraintError", f"object store {name!r} exists")
            db.stores[name] = StoreState(name, key_path)
            return store_handle(name)

        def transaction(a):
            record("IDBDatabase.transaction", a)
            tx = JSObject({}, "IDBTransaction")
            tx.props["objectStore"] = _fn(
                "IDBTransaction.objectStore", lambda b: store_handle(str.__str__(to_string(_arg(b, 0))))
            )
            return tx

        return HostObject("IDBDatabase", {
            "name": db.name,
            "version": float(db.version),
            "createObjectStore": _fn("IDBDatabase.createObjectStore", create_store),
            "transaction": _fn("IDBDatabase.transaction", transaction),
        })

    def idb_open(a):
        name = str.__str__(to_string(_arg(a, 0)))
        version_arg = _arg(a, 1)
        record("indexedDB.open", a)
        db = emu.origin.idb.setdefault(name, IdbDatabase(name))
        req = idb_request("IDBOpenDBRequest")
        req.props["onupgradeneeded"] = None

        def run():
            requested = db.version or 1 if version_arg is UNDEFINED else int(to_number(version_arg))
            handle = database_object(db)
            req.props["result"] = handle
            if requested > db.version:
                old = db.version
                db.version = requested
                handle.props["version"] = float(requested)
                fire(req, "onupgradeneeded", oldVersion=float(old), newVersion=float(requested))
            fire(req, "onsuccess")

        emu.enqueue(realm, run, "idb open")
        return req

    g["indexedDB"] = JSObject({"open": _fn("indexedDB.open", idb_open)}, "IDBFactory")

    # -- Blob / BlobBuilder / FileReader ---------------------------------

    def make_blob(parts: list) -> HostObject:
        blob = HostObject("Blob", {"type": ""})
        blob.parts = list(parts)  # type: ignore[attr-defined]
        blob.props["size"] = float(sum(len(to_string(p)) for p in parts))
        return blob

    def blob_builder(interp_, args):
        parts: list = []

        def append(a):
            data = _arg(a, 0)
            if isinstance(data, HostObject) and hasattr(data, "parts"):
                parts.extend(data.parts)
                return UNDEFINED
            o = record("BlobBuilder.append", a)
            parts.append(note_write(to_string(data), "BlobBuilder.append", o))
            return UNDEFINED

        def get_blob(a):
            record("BlobBuilder.getBlob")
            return make_blob(parts)

        return HostObject("BlobBuilder", {
            "append": _fn("BlobBuilder.append", append),
            "getBlob": _fn("BlobBuilder.getBlob", get_blob),
        })

    def blob_ctor(interp_, args):
        arr = _arg(args, 0)
        items = arr.items if isinstance(arr, JSArray) else []
        o = record("Blob", [len(items)])
        parts = []
        for p in items:
            if isinstance(p, HostObject) and hasattr(p, "parts"):
                parts.extend(p.parts)
            else:
                parts.append(note_write(to_string(p), "Blob", o))
        return make_blob(parts)

    def file_reader(interp_, args):
        fr = HostObject("FileReader", {"result": None, "onload": None, "onloadend": None, "readyState": 0.0})

        def read_as_text(a):
            blob = _arg(a, 0)
            if not (isinstance(blob, HostObject) and hasattr(blob, "parts")):
                raise interp.error("TypeError", "readAsText expects a Blob")
            o = record("FileReader.readAsText")
            parts = list(blob.parts)

            def done():
                text = blob_concat(parts)
                interp.check_string_len(len(text))
                fr.props["result"] = storage_read(text, "FileReader.readAsText", o)
                fr.props["readyState"] = 2.0
                evt = JSObject({"target": fr, "type": "load"}, "ProgressEvent")
                emu.call_handler(fr.get("onload"), [evt])
                emu.call_handler(fr.get("onloadend"), [evt])

            emu.enqueue(realm, done, "filereader")
            return UNDEFINED

        fr.props["readAsText"] = _fn("FileReader.readAsText", read_as_text)
        return fr

    g["BlobBuilder"] = HostFunction("BlobBuilder", lambda i, t, a: blob_builder(i, a), blob_builder)
    g["Blob"] = HostFunction("Blob", lambda i, t, a: blob_ctor(i, a), blob_ctor)
    g["FileReader"] = HostFunction("FileReader", lambda i, t, a: file_reader(i, a), file_reader)

    # -- Worker ----------------------------------------------------------

    def worker_ctor(interp_, args):
        url = str.__str__(to_string(_arg(args, 0)))
        record("Worker", [url])
        handle = HostObject("Worker", {"onmessage": None})
        child = emu.spawn_worker(url, handle)

        def post(a):
            emu.deliver_message(realm.id, child.id, _arg(a, 0))
            return UNDEFINED

        handle.props["postMessage"] = _fn("Worker.postMessage", post)
        handle.props["terminate"] = _fn("Worker.terminate", lambda a: UNDEFINED)
        return handle

    g["Worker"] = HostFunction("Worker", lambda i, t, a: worker_ctor(i, a), worker_ctor)

    # -- WebSocket -------------------------------------------------------

    def websocket_ctor(interp_, args):
        url = str.__str__(to_string(_arg(args, 0)))
        record("WebSocket", [url])
        path = urllib.parse.urlsplit(url).path if "://" in url else url
        channel = path.rstrip("/").rsplit("/", 1)[-1] or "ws"
        messages = emu.env.feed.for_channel(channel)
        ws = HostObject("WebSocket", {
            "url": url, "readyState": 0.0,
            "onopen": None, "onmessage": None, "onclose": None, "onerror": None,
        })
        closed = {"v": False}

        def send(a):
            record("WebSocket.send", a)
            return UNDEFINED

        def close(a):
            record("WebSocket.close")
            closed["v"] = True
            return UNDEFINED

        ws.props["send"] = _fn("WebSocket.send", send)
        ws.props["close"] = _fn("WebSocket.close", close)

        def deliver(i: int) -> None:
            if closed["v"]:
                return
            if i < len(messages):
                msg = messages[i]
                o = emu.trace.append("message_in", realm=realm.id, **{"from": f"ws:{channel}"}, id=msg.id)
                payload: Any = msg.payload
                if policy.network:
                    payload = tag(payload, new_label(NETWORK, "WebSocket.onmessage", o))
                if msg.id is None or emu.env.feed.framing == "text":
                    data: Any = payload
                else:
                    data = JSObject({"id": float(msg.id), "chunk": payload})
                emu.call_handler(ws.get("onmessage"), [JSObject({"data": data, "type": "message"}, "MessageEvent")])
                emu.enqueue(realm, lambda: deliver(i + 1), "ws message")
            elif emu.env.feed.close_after:
                ws.props["readyState"] = 3.0
                emu.trace.append("ws_close", realm=realm.id, channel=channel)
                emu.call_handler(ws.get("onclose"), [JSObject({"code": 1000.0, "type": "close"}, "CloseEvent")])

        def open_() -> None:
            ws.props["readyState"] = 1.0
            emu.call_handler(ws.get("onopen"), [JSObject({"type": "open"}, "Event")])
            emu.enqueue(realm, lambda: deliver(0), "ws message")

        emu.enqueue(realm, open_, "ws open")
        return ws

    g["WebSocket"] = HostFunction("WebSocket", lambda i, t, a: websocket_ctor(i, a), websocket_ctor)
