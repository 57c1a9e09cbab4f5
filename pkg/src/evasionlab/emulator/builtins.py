"""Methods of primitive values, arrays and functions.

Every string-returning method tags its result with the receiver's taint
(whole-string granularity) merged with the taint of string arguments.
"""

from __future__ import annotations

import math
from functools import cmp_to_key
from typing import TYPE_CHECKING, Any, Callable

from .taint import merge, tag, taint_of
from .values import (
    UNDEFINED, HostFunction, JSArray, array_join, number_to_string, strict_equals,
    to_boolean, to_number, to_string,
)

if TYPE_CHECKING:
    from .interp import Interpreter


def _int_arg(args: list, i: int, default: int) -> int:
    if i >= len(args) or args[i] is UNDEFINED:
        return default
    n = to_number(args[i])
    if n != n:
        return 0
    if math.isinf(n):
        return 1 << 53 if n > 0 else -(1 << 53)
    return int(n)


def _bound(name: str, fn: Callable) -> HostFunction:
    return HostFunction(name, fn)


# -- strings -----------------------------------------------------------------


def _clamp(i: int, size: int) -> int:
    return max(0, min(i, size))


def string_method(s: str, name: str) -> Any:
    label = taint_of(s)
    raw = str.__str__(s)

    def out(text: str, *extra: Any) -> str:
        lab = label
        more = merge(extra)
        if more is not None:
            lab = more if lab is None else lab.union(more)
        return tag(text, lab)

    if name == "substring":
        def substring(interp, this, args):
            size = len(raw)
            a = _clamp(_int_arg(args, 0, 0), size)
            b = _clamp(_int_arg(args, 1, size), size)
            if a > b:
                a, b = b, a
            return out(raw[a:b])
        return _bound(name, substring)
    if name == "substr":
        def substr(interp, this, args):
            size = len(raw)
            start = _int_arg(args, 0, 0)
            if start < 0:
                start = max(0, size + start)
            length = _int_arg(args, 1, size - start)
            return out(raw[start:start + max(0, length)])
        return _bound(name, substr)
    if name == "slice":
        def slice_(interp, this, args):
            size = len(raw)
            a = _int_arg(args, 0, 0)
            b = _int_arg(args, 1, size)
            a = size + a if a < 0 else a
            b = size + b if b < 0 else b
            return out(raw[_clamp(a, size):_clamp(b, size)])
        return _bound(name, slice_)
    if name == "charAt":
        def char_at(interp, this, args):
            i = _int_arg(args, 0, 0)
            return out(raw[i]) if 0 <= i < len(raw) else ""
        return _bound(name, char_at)
    if name == "charCodeAt":
        def char_code_at(interp, this, args):
            i = _int_arg(args, 0, 0)
            return float(ord(raw[i])) if 0 <= i < len(raw) else math.nan
        return _bound(name, char_code_at)
    if name in ("indexOf", "lastIndexOf"):
        def index_of(interp, this, args):
            needle = str.__str__(to_string(args[0])) if args else "undefined"
            if name == "indexOf":
                return float(raw.find(needle, max(0, _int_arg(args, 1, 0))))
            return float(raw.rfind(needle))
        return _bound(name, index_of)
    if name == "split":
        def split(interp, this, args):
            if not args or args[0] is UNDEFINED:
                return JSArray([out(raw)])
            sep = str.__str__(to_string(args[0]))
            parts = list(raw) if sep == "" else raw.split(sep)
            return JSArray([out(p) for p in parts])
        return _bound(name, split)
    if name in ("toUpperCase", "toLowerCase"):
        def case(interp, this, args):
            return out(raw.upper() if name == "toUpperCase" else raw.lower())
        return _bound(name, case)
    if name == "concat":
        def concat(interp, this, args):
            parts = [to_string(a) for a in args]
            text = raw + "".join(str.__str__(p) for p in parts)
            interp.check_string_len(len(text))
            return out(text, *parts)
        return _bound(name, concat)
    if name == "replace":
        def replace(interp, this, args):
            pat = str.__str__(to_string(args[0])) if args else "undefined"
            rep = to_string(args[1]) if len(args) > 1 else "undefined"
            return out(raw.replace(pat, str.__str__(rep), 1), rep)
        return _bound(name, replace)
    if name in ("toString", "valueOf"):
        return _bound(name, lambda interp, this, args: s)
    if name == "trim":
        return _bound(name, lambda interp, this, args: out(raw.strip()))
    return UNDEFINED


# -- numbers and booleans ----------------------------------------------------

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _to_radix(v: float, radix: int) -> str:
    if radix == 10 or v != v or math.isinf(v) or v != int(v):
        return number_to_string(v)
    i = int(v)
    if i == 0:
        return "0"
    sign = "-" if i < 0 else ""
    i = abs(i)
    digits = []
    while i:
        i, r = divmod(i, radix)
        digits.append(_DIGITS[r])
    return sign + "".join(reversed(digits))


def number_method(v: float, name: str) -> Any:
    if name == "toString":
        return _bound(name, lambda interp, this, args: _to_radix(v, _int_arg(args, 0, 10)))
    if name == "toFixed":
        def to_fixed(interp, this, args):
            return f"{v:.{max(0, min(20, _int_arg(args, 0, 0)))}f}"
        return _bound(name, to_fixed)
    if name == "valueOf":
        return _bound(name, lambda interp, this, args: v)
    return UNDEFINED


def bool_method(v: bool, name: str) -> Any:
    if name == "toString":
        return _bound(name, lambda interp, this, args: "true" if v else "false")
    return UNDEFINED


# -- arrays ------------------------------------------------------------------


def _default_compare(a: Any, b: Any) -> int:
    if a is UNDEFINED:
        return 0 if b is UNDEFINED else 1
    if b is UNDEFINED:
        return -1
    x, y = str.__str__(to_string(a)), str.__str__(to_string(b))
    return (x > y) - (x < y)


def array_method(arr: JSArray, name: str) -> Any:
    items = arr.items
    if name == "push":
        def push(interp, this, args):
            items.extend(args)
            if len(items) > interp.string_cap:
                interp.check_string_len(len(items))
            return float(len(items))
        return _bound(name, push)
    if name == "pop":
        return _bound(name, lambda interp, this, args: items.pop() if items else UNDEFINED)
    if name == "shift":
        return _bound(name, lambda interp, this, args: items.pop(0) if items else UNDEFINED)
    if name == "unshift":
        def unshift(interp, this, args):
            items[:0] = args
            return float(len(items))
        return _bound(name, unshift)
    if name == "join":
        def join(interp, this, args):
            sep = "," if not args or args[0] is UNDEFINED else to_string(args[0])
            text = array_join(items, sep)
            interp.check_string_len(len(text))
            return text
        return _bound(name, join)
    if name == "slice":
        def slice_(interp, this, args):
            size = len(items)
            a = _int_arg(args, 0, 0)
            b = _int_arg(args, 1, size)
            a = size + a if a < 0 else a
            b = size + b if b < 0 else b
            return JSArray(items[_clamp(a, size):_clamp(b, size)])
        return _bound(name, slice_)
    if name == "concat":
        def concat(interp, this, args):
            out = list(items)
            for a in args:
                out.extend(a.items if isinstance(a, JSArray) else [a])
            return JSArray(out)
        return _bound(name, concat)
    if name == "indexOf":
        def index_of(interp, this, args):
            target = args[0] if args else UNDEFINED
            for i, x in enumerate(items):
                if strict_equals(x, target):
                    return float(i)
            return -1.0
        return _bound(name, index_of)
    if name == "reverse":
        def reverse(interp, this, args):
            items.reverse()
            return arr
        return _bound(name, reverse)
    if name == "sort":
        def sort(interp, this, args):
            if args and args[0] is not UNDEFINED:
                fn = args[0]

                def cmp(a, b):
                    r = to_number(interp.call(fn, UNDEFINED, [a, b]))
                    return -1 if r < 0 else (1 if r > 0 else 0)
                items.sort(key=cmp_to_key(cmp))
            else:
                items.sort(key=cmp_to_key(_default_compare))
            return arr
        return _bound(name, sort)
    if name in ("forEach", "map", "filter"):
        def iterate(interp, this, args):
            fn = args[0] if args else UNDEFINED
            results = []
            for i, x in enumerate(list(items)):
                r = interp.call(fn, UNDEFINED, [x, float(i), arr])
                if name == "map":
                    results.append(r)
                elif name == "filter" and to_boolean(r):
                    results.append(x)
            return UNDEFINED if name == "forEach" else JSArray(results)
        return _bound(name, iterate)
    if name == "toString":
        return _bound(name, lambda interp, this, args: array_join(items, ","))
    return UNDEFINED


# -- functions ---------------------------------------------------------------


def function_method(fn: Any, name: str) -> Any:
    if name == "call":
        return _bound(name, lambda interp, this, args: interp.call(fn, args[0] if args else UNDEFINED, args[1:]))
    if name == "apply":
        def apply(interp, this, args):
            rest = args[1] if len(args) > 1 and isinstance(args[1], JSArray) else JSArray()
            return interp.call(fn, args[0] if args else UNDEFINED, list(rest.items))
        return _bound(name, apply)
    if name == "name":
        return getattr(fn, "name", "")
    return UNDEFINED
