"""Runtime value model and the JS conversions the subset needs.

Numbers are Python floats, strings are ``str`` (or ``TStr`` when tainted),
``None`` is null and :data:`UNDEFINED` is undefined.  Python ``str`` code
points stand in for UTF-16 code units.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any, Callable, Optional

from .errors import CloneError
from .taint import TaintLabel, TStr, tag, taint_of

if TYPE_CHECKING:
    from ..js import nodes
    from .interp import Scope


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undefined"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()


class ProbeNumber(float):
    """Sentinel number whose comparisons are observed by the interpreter."""


class JSObject:
    """Plain object: insertion-ordered string-keyed properties."""

    def __init__(self, props: Optional[dict] = None, label: str = "Object"):
        self.props: dict[str, Any] = dict(props or {})
        self.label = label

    def get(self, key: str) -> Any:
        return self.props.get(key, UNDEFINED)

    def set(self, key: str, value: Any) -> None:
        self.props[key] = value

    def __repr__(self) -> str:
        return f"<{self.label} {list(self.props)}>"


class HostObject(JSObject):
    """Object with optional computed getters and set hooks."""

    def __init__(self, label: str, props: Optional[dict] = None,
                 getters: Optional[dict[str, Callable[[], Any]]] = None,
                 on_set: Optional[Callable[[str, Any], None]] = None):
        super().__init__(props, label)
        self.getters = getters or {}
        self.on_set = on_set

    def get(self, key: str) -> Any:
        g = self.getters.get(key)
        if g is not None:
            return g()
        return super().get(key)

    def set(self, key: str, value: Any) -> None:
        super().set(key, value)
        if self.on_set is not None:
            self.on_set(key, value)


class InertObject(JSObject):
    """Stand-in for DOM pieces the emulator does not model.

    Unknown properties read as traced no-op methods returning another inert
    object, so chains like ``el.getContext("2d").fillRect(...)`` run.
    """

    def __init__(self, label: str, record: Callable[[str, list], None]):
        super().__init__(label=label)
        self.record = record

    def get(self, key: str) -> Any:
        if key in self.props:
            return self.props[key]
        name = f"{self.label}.{key}"
        record = self.record

        def call(interp, this, args):
            record(name, args)
            return InertObject(name + "()", record)

        return HostFunction(name, call)


class JSArray(JSObject):
    def __init__(self, items: Optional[list] = None):
        super().__init__(label="Array")
        self.items: list[Any] = list(items or [])

    def __repr__(self) -> str:
        return f"<Array len={len(self.items)}>"


class JSFunction(JSObject):
    def __init__(self, node: "nodes.FunctionDecl | nodes.FunctionExpr", closure: "Scope", realm: str):
        super().__init__(label="Function")
        self.node = node
        self.closure = closure
        self.realm = realm
        self.name = node.name or ""

    def __repr__(self) -> str:
        return f"<function {self.name or '(anonymous)'}>"


class HostFunction(JSObject):
    """Native function: ``fn(interp, this, args) -> value``."""

    def __init__(self, name: str, fn: Callable, construct: Optional[Callable] = None):
        super().__init__(label="Function")
        self.name = name
        self.fn = fn
        self.construct = construct

    def __repr__(self) -> str:
        return f"<host {self.name}>"


CALLABLE = (JSFunction, HostFunction)


# -- conversions -------------------------------------------------------------


def number_to_string(v: float) -> str:
    if v != v:
        return "NaN"
    if v in (math.inf, -math.inf):
        return "Infinity" if v > 0 else "-Infinity"
    if v == int(v) and abs(v) < 1e21:
        return str(int(v))
    r = repr(float(v))
    if "e" in r:
        mant, exp = r.split("e")
        e = int(exp)
        if -7 < e < 21:
            return format(v, "f").rstrip("0").rstrip(".")
        return f"{mant}e{'+' if e > 0 else '-'}{abs(e)}"
    return r


def to_string(v: Any) -> str:
    """ToString, preserving taint on strings."""
    if isinstance(v, str):
        return v
    if v is UNDEFINED:
        return "undefined"
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        return number_to_string(v)
    if isinstance(v, JSArray):
        return array_join(v.items, ",")
    if isinstance(v, CALLABLE):
        return f"function {getattr(v, 'name', '')}() {{ [code] }}"
    return "[object Object]"


def array_join(items: list, sep: str) -> str:
    parts = ["" if (x is UNDEFINED or x is None) else to_string(x) for x in items]
    label = None
    for p in parts + [sep]:
        t = taint_of(p)
        if t is not None:
            label = t if label is None else label.union(t)
    return tag(sep.join(parts), label)


def to_number(v: Any) -> float:
    if isinstance(v, bool):
        return 1.0 if v else 0.0
    if isinstance(v, float):
        return v
    if v is None:
        return 0.0
    if v is UNDEFINED:
        return math.nan
    if isinstance(v, str):
        s = v.strip()
        if not s:
            return 0.0
        if s[:2].lower() == "0x":
            try:
                return float(int(s[2:], 16))
            except ValueError:
                return math.nan
        if s in ("Infinity", "+Infinity"):
            return math.inf
        if s == "-Infinity":
            return -math.inf
        try:
            if any(c.isalpha() and c not in "eE" for c in s):
                return math.nan
            return float(s)
        except ValueError:
            return math.nan
    if isinstance(v, JSArray):
        return to_number(to_string(v))
    return math.nan


def to_boolean(v: Any) -> bool:
    if isinstance(v, bool):
        return v
    if v is None or v is UNDEFINED:
        return False
    if isinstance(v, float):
        return not (v == 0 or v != v)
    if isinstance(v, str):
        return len(v) > 0
    return True


def to_int32(v: Any) -> int:
    n = to_number(v)
    if n != n or n in (math.inf, -math.inf):
        return 0
    i = int(n) & 0xFFFFFFFF
    return i - (1 << 32) if i >= (1 << 31) else i


def type_tag(v: Any) -> str:
    if v is UNDEFINED:
        return "undefined"
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, float):
        return "number"
    if isinstance(v, str):
        return "string"
    return "object"


def strict_equals(a: Any, b: Any) -> bool:
    ta, tb = type_tag(a), type_tag(b)
    if ta != tb:
        return False
    if ta in ("number", "string", "boolean"):
        return a == b
    if ta in ("undefined", "null"):
        return True
    return a is b


def to_primitive(v: Any) -> Any:
    if isinstance(v, JSObject):
        return to_string(v)
    return v


def loose_equals(a: Any, b: Any) -> bool:
    ta, tb = type_tag(a), type_tag(b)
    if ta == tb:
        return strict_equals(a, b)
    if ta in ("undefined", "null") and tb in ("undefined", "null"):
        return True
    if ta in ("undefined", "null") or tb in ("undefined", "null"):
        return False
    if ta == "boolean":
        return loose_equals(to_number(a), b)
    if tb == "boolean":
        return loose_equals(a, to_number(b))
    if ta == "object":
        return loose_equals(to_primitive(a), b)
    if tb == "object":
        return loose_equals(a, to_primitive(b))
    return to_number(a) == to_number(b)


def property_key(v: Any) -> str:
    return str.__str__(to_string(v)) if isinstance(v, str) else to_string(v)


# -- structured clone --------------------------------------------------------


def structured_clone(value: Any, _memo: Optional[dict] = None) -> Any:
    """Deep copy for cross-realm messaging.  Taint labels are kept as is."""
    if _memo is None:
        _memo = {}
    if isinstance(value, TStr):
        return tag(str.__str__(value), value.taint)
    if value is None or value is UNDEFINED or isinstance(value, (bool, float, str)):
        return value
    if id(value) in _memo:
        return _memo[id(value)]
    if isinstance(value, CALLABLE):
        raise CloneError(f"cannot clone {value!r}")
    if isinstance(value, JSArray):
        out = JSArray()
        _memo[id(value)] = out
        out.items = [structured_clone(v, _memo) for v in value.items]
        return out
    if type(value) is JSObject:
        out = JSObject()
        _memo[id(value)] = out
        for k, v in value.props.items():
            out.props[k] = structured_clone(v, _memo)
        return out
    raise CloneError(f"cannot clone host object {value!r}")


def map_strings(value: Any, fn: Callable[[str], str], _seen: Optional[set] = None) -> Any:
    """Apply ``fn`` to every string inside a cloned value, in place for containers."""
    if isinstance(value, str):
        return fn(value)
    if _seen is None:
        _seen = set()
    if id(value) in _seen:
        return value
    if isinstance(value, JSArray):
        _seen.add(id(value))
        value.items = [map_strings(v, fn, _seen) for v in value.items]
    elif type(value) is JSObject:
        _seen.add(id(value))
        for k in value.props:
            value.props[k] = map_strings(value.props[k], fn, _seen)
    return value


def add_label(value: str, label: TaintLabel) -> str:
    t = taint_of(value)
    return tag(value, label if t is None else t.union(label))


def from_python(value: Any) -> Any:
    """Convert JSON-like Python data into runtime values."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return JSArray([from_python(v) for v in value])
    if isinstance(value, dict):
        return JSObject({str(k): from_python(v) for k, v in value.items()})
    raise TypeError(f"unsupported value {value!r}")


def to_python(value: Any) -> Any:
    """Convert runtime values to JSON-friendly Python data."""
    if isinstance(value, str):
        return str.__str__(value)
    if value is UNDEFINED:
        return None
    if isinstance(value, float):
        if math.isfinite(value) and value == int(value) and abs(value) < 2**53:
            return int(value)
        return value if math.isfinite(value) else None
    if isinstance(value, JSArray):
        return [to_python(v) for v in value.items]
    if isinstance(value, JSObject) and not isinstance(value, CALLABLE):
        return {k: to_python(v) for k, v in value.props.items()}
    if isinstance(value, CALLABLE):
        return f"<function {value.name}>"
    return value
