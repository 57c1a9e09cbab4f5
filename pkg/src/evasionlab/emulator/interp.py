"""Tree-walking evaluator for the JavaScript subset.

The evaluator knows nothing about scheduling or host objects; it calls back
into its :class:`Host` for sinks, guard decisions and step accounting.
"""

from __future__ import annotations

import math
from typing import Any, Callable, Optional, Protocol

from ..js import nodes as n
from ..js.parser import ParseError, parse_source
from ..js.source import SourceSpan
from ..js.tokens import LexError
from . import builtins
from .errors import BudgetExhausted, ScriptError
from .taint import TaintLabel, TStr, tag, taint_of
from .values import (
    CALLABLE, UNDEFINED, HostFunction, JSArray, JSFunction, JSObject, ProbeNumber,
    loose_equals, property_key, strict_equals, to_boolean, to_int32, to_number,
    to_primitive, to_string,
)

EVAL_DEPTH_CAP = 8
CALL_DEPTH_CAP = 150


class Scope:
    __slots__ = ("vars", "parent", "is_function")

    def __init__(self, parent: Optional["Scope"] = None, is_function: bool = False):
        self.vars: dict[str, Any] = {}
        self.parent = parent
        self.is_function = is_function or parent is None

    def find(self, name: str) -> Optional["Scope"]:
        s: Optional[Scope] = self
        while s is not None:
            if name in s.vars:
                return s
            s = s.parent
        return None

    def function_scope(self) -> "Scope":
        s = self
        while not s.is_function:
            s = s.parent  # type: ignore[assignment]
        return s

    def root(self) -> "Scope":
        s = self
        while s.parent is not None:
            s = s.parent
        return s


class Host(Protocol):
    """Callbacks the evaluator needs from the surrounding runtime."""

    realm_id: str

    def record_sink(self, code: str, api: str) -> None: ...
    def guard_decision(self, node: n.If, natural: bool) -> bool: ...
    def observe_probe(self, other: Any) -> None: ...
    def global_scope(self) -> "Scope": ...


class _Return(Exception):
    def __init__(self, value: Any):
        self.value = value


def _collect_hoisted(body: list[n.Node]) -> tuple[list[str], list[n.FunctionDecl]]:
    names: list[str] = []
    decls: list[n.FunctionDecl] = []
    stack = list(reversed(body))
    while stack:
        node = stack.pop()
        if isinstance(node, n.FunctionDecl):
            decls.append(node)
            continue
        if isinstance(node, n.FunctionExpr):
            continue
        if isinstance(node, n.VarDecl):
            names.extend(d.name for d in node.declarations)
        if isinstance(node, (n.Block, n.If, n.For, n.While, n.VarDecl)):
            stack.extend(reversed(list(n.children(node))))
    return names, decls


def taint_literals(program: n.Program, label: TaintLabel) -> None:
    """Mark every string literal of code built from tainted text."""
    for node in n.walk(program):
        if isinstance(node, n.StringLit):
            node.value = tag(str.__str__(node.value), label)


class Interpreter:
    def __init__(self, host: Host, step_budget: int, string_cap: int):
        self.host = host
        self.step_budget = step_budget
        self.string_cap = string_cap
        self.steps = 0
        self.eval_depth = 0
        self.call_depth = 0
        self._hoist_cache: dict[int, tuple[Any, list[str], list[n.FunctionDecl]]] = {}
        self._parse_cache: dict[str, n.Program] = {}
        self.eval_builtin = HostFunction("eval", self._indirect_eval)
        self._expr_dispatch: dict[type, Callable[[Any, Scope], Any]] = {
            n.Identifier: self._identifier,
            n.StringLit: lambda node, scope: node.value,
            n.NumberLit: lambda node, scope: float(node.value),
            n.BoolLit: lambda node, scope: node.value,
            n.NullLit: lambda node, scope: None,
            n.ArrayLit: self._array,
            n.ObjectLit: self._object,
            n.FunctionExpr: self._function_expr,
            n.Call: self._call,
            n.New: self._new,
            n.Member: self._member,
            n.Assign: self._assign,
            n.Binary: self._binary,
            n.Logical: self._logical,
            n.Unary: self._unary,
            n.Update: self._update,
        }
        self._stmt_dispatch: dict[type, Callable[[Any, Scope], None]] = {
            n.VarDecl: self._var_decl,
            n.FunctionDecl: lambda node, scope: None,
            n.ExprStmt: lambda node, scope: self.eval(node.expression, scope),
            n.If: self._if,
            n.For: self._for,
            n.While: self._while,
            n.Return: self._return,
            n.Block: lambda node, scope: self.exec_list(node.body, scope),
            n.Empty: lambda node, scope: None,
        }

    # -- errors and accounting -------------------------------------------

    def error(self, kind: str, message: str, node: Optional[n.Node] = None) -> ScriptError:
        span = node.span if node is not None else None
        return ScriptError(kind, message, self.host.realm_id, span)

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.step_budget:
            raise BudgetExhausted(f"step budget {self.step_budget} exhausted")

    def check_string(self, s: str) -> str:
        if len(s) > self.string_cap:
            raise BudgetExhausted(f"string of {len(s)} code units exceeds cap {self.string_cap}")
        return s

    # -- programs --------------------------------------------------------

    def hoist(self, owner: Any, body: list[n.Node], scope: Scope) -> None:
        cached = self._hoist_cache.get(id(owner))
        if cached is None or cached[0] is not owner:
            names, decls = _collect_hoisted(body)
            cached = (owner, names, decls)
            self._hoist_cache[id(owner)] = cached
        _, names, decls = cached
        fscope = scope.function_scope()
        for name in names:
            if name not in fscope.vars:
                fscope.vars[name] = UNDEFINED
        for decl in decls:
            fscope.vars[decl.name] = JSFunction(decl, scope, self.host.realm_id)

    def run_program(self, program: n.Program, scope: Scope) -> Any:
        """Execute a program in ``scope``; returns the completion value."""
        self.hoist(program, program.body, scope)
        completion: Any = UNDEFINED
        for stmt in program.body:
            if isinstance(stmt, n.ExprStmt):
                self.tick()
                completion = self.eval(stmt.expression, scope)
            else:
                self.exec(stmt, scope)
        return completion

    def exec_list(self, stmts: list[n.Node], scope: Scope) -> None:
        for s in stmts:
            self.exec(s, scope)

    def exec(self, node: n.Node, scope: Scope) -> None:
        self.tick()
        self._stmt_dispatch[type(node)](node, scope)

    def eval(self, node: n.Node, scope: Scope) -> Any:
        self.tick()
        return self._expr_dispatch[type(node)](node, scope)

    # -- statements ------------------------------------------------------

    def _var_decl(self, node: n.VarDecl, scope: Scope) -> None:
        for d in node.declarations:
            if d.init is not None:
                value = self.eval(d.init, scope)
                target = scope.find(d.name) or scope.function_scope()
                target.vars[d.name] = value

    def _if(self, node: n.If, scope: Scope) -> None:
        natural = to_boolean(self.eval(node.test, scope))
        taken = self.host.guard_decision(node, natural)
        if taken:
            self.exec(node.consequent, scope)
        elif node.alternate is not None:
            self.exec(node.alternate, scope)

    def _for(self, node: n.For, scope: Scope) -> None:
        if node.init is not None:
            if isinstance(node.init, n.VarDecl):
                self.exec(node.init, scope)
            else:
                self.eval(node.init, scope)
        while node.test is None or to_boolean(self.eval(node.test, scope)):
            self.exec(node.body, scope)
            if node.update is not None:
                self.eval(node.update, scope)

    def _while(self, node: n.While, scope: Scope) -> None:
        while to_boolean(self.eval(node.test, scope)):
            self.exec(node.body, scope)

    def _return(self, node: n.Return, scope: Scope) -> None:
        value = UNDEFINED if node.argument is None else self.eval(node.argument, scope)
        raise _Return(value)

    # -- expressions -----------------------------------------------------

    def _identifier(self, node: n.Identifier, scope: Scope) -> Any:
        s = scope
        name = node.name
        while s is not None:
            v = s.vars.get(name, s)
            if v is not s:
                return v
            s = s.parent
        raise self.error("ReferenceError", f"{name} is not defined", node)

    def _array(self, node: n.ArrayLit, scope: Scope) -> JSArray:
        return JSArray([self.eval(e, scope) for e in node.elements])

    def _object(self, node: n.ObjectLit, scope: Scope) -> JSObject:
        return JSObject({p.key: self.eval(p.value, scope) for p in node.properties})

    def _function_expr(self, node: n.FunctionExpr, scope: Scope) -> JSFunction:
        return JSFunction(node, scope, self.host.realm_id)

    def _call(self, node: n.Call, scope: Scope) -> Any:
        callee = node.callee
        if isinstance(callee, n.Member):
            this = self.eval(callee.object, scope)
            fn = self.get_prop(this, self._member_key(callee, scope), callee)
        else:
            this = UNDEFINED
            fn = self.eval(callee, scope)
        args = [self.eval(a, scope) for a in node.args]
        if fn is self.eval_builtin and isinstance(callee, n.Identifier):
            return self.direct_eval(args[0] if args else UNDEFINED, scope, "eval")
        if not isinstance(fn, CALLABLE):
            raise self.error("TypeError", f"{self._describe(callee)} is not a function", node)
        return self.call(fn, this, args, node)

    def _new(self, node: n.New, scope: Scope) -> Any:
        ctor = self.eval(node.callee, scope)
        args = [self.eval(a, scope) for a in node.args]
        if isinstance(ctor, HostFunction):
            if ctor.construct is None:
                raise self.error("TypeError", f"{ctor.name} is not a constructor", node)
            return ctor.construct(self, args)
        if isinstance(ctor, JSFunction):
            self.call(ctor, UNDEFINED, args, node)
            return JSObject()
        raise self.error("TypeError", f"{self._describe(node.callee)} is not a constructor", node)

    def _member_key(self, node: n.Member, scope: Scope) -> Any:
        if node.computed:
            return self.eval(node.property, scope)  # type: ignore[arg-type]
        return node.property

    def _member(self, node: n.Member, scope: Scope) -> Any:
        obj = self.eval(node.object, scope)
        return self.get_prop(obj, self._member_key(node, scope), node)

    def _assign(self, node: n.Assign, scope: Scope) -> Any:
        target = node.target
        if isinstance(target, n.Identifier):
            if node.op == "=":
                value = self.eval(node.value, scope)
            else:
                value = self.arith(node.op[0], self._identifier(target, scope), self.eval(node.value, scope), node)
            self.assign(target.name, value, scope)
            return value
        if isinstance(target, n.Member):
            obj = self.eval(target.object, scope)
            key = self._member_key(target, scope)
            if node.op == "=":
                value = self.eval(node.value, scope)
            else:
                value = self.arith(node.op[0], self.get_prop(obj, key, target), self.eval(node.value, scope), node)
            self.set_prop(obj, key, value, target)
            return value
        raise self.error("SyntaxError", "invalid assignment target", node)

    def assign(self, name: str, value: Any, scope: Scope) -> None:
        target = scope.find(name)
        if target is None:
            # sloppy-mode implicit global
            target = scope.root()
        target.vars[name] = value

    def _binary(self, node: n.Binary, scope: Scope) -> Any:
        left = self.eval(node.left, scope)
        right = self.eval(node.right, scope)
        return self.binary(node.op, left, right, node)

    def binary(self, op: str, left: Any, right: Any, node: Optional[n.Node] = None) -> Any:
        if op in ("+", "-", "*", "/", "%"):
            return self.arith(op, left, right, node)
        if isinstance(left, ProbeNumber):
            self.host.observe_probe(right)
        elif isinstance(right, ProbeNumber):
            self.host.observe_probe(left)
        if op == "==":
            return loose_equals(left, right)
        if op == "!=":
            return not loose_equals(left, right)
        if op == "===":
            return strict_equals(left, right)
        if op == "!==":
            return not strict_equals(left, right)
        a, b = to_primitive(left), to_primitive(right)
        if isinstance(a, str) and isinstance(b, str):
            x, y = str.__str__(a), str.__str__(b)
        else:
            x, y = to_number(a), to_number(b)
            if x != x or y != y:
                return False
        if op == "<":
            return x < y
        if op == "<=":
            return x <= y
        if op == ">":
            return x > y
        if op == ">=":
            return x >= y
        raise self.error("SyntaxError", f"unknown operator {op}", node)

    def arith(self, op: str, left: Any, right: Any, node: Optional[n.Node] = None) -> Any:
        if op == "+":
            if isinstance(left, float) and isinstance(right, float):
                return left + right
            a, b = to_primitive(left), to_primitive(right)
            if isinstance(a, str) or isinstance(b, str):
                sa, sb = to_string(a), to_string(b)
                self.check_string_len(len(sa) + len(sb))
                ta, tb = taint_of(sa), taint_of(sb)
                if ta is None and tb is None:
                    return sa + sb
                label = ta.union(tb) if ta is not None else tb
                return tag(str.__str__(sa) + str.__str__(sb), label)
            return to_number(a) + to_number(b)
        x, y = to_number(left), to_number(right)
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if op == "/":
            if y == 0:
                if x != x or x == 0:
                    return math.nan
                return math.copysign(math.inf, x) * math.copysign(1.0, y)
            return x / y
        if op == "%":
            if y == 0 or x != x or y != y or math.isinf(x):
                return math.nan
            if math.isinf(y):
                return x
            return math.fmod(x, y)
        raise self.error("SyntaxError", f"unknown operator {op}", node)

    def check_string_len(self, length: int) -> None:
        if length > self.string_cap:
            raise BudgetExhausted(f"string of {length} code units exceeds cap {self.string_cap}")

    def _logical(self, node: n.Logical, scope: Scope) -> Any:
        left = self.eval(node.left, scope)
        if node.op == "&&":
            return self.eval(node.right, scope) if to_boolean(left) else left
        return left if to_boolean(left) else self.eval(node.right, scope)

    def _unary(self, node: n.Unary, scope: Scope) -> Any:
        v = self.eval(node.argument, scope)
        if node.op == "!":
            return not to_boolean(v)
        if node.op == "-":
            return -to_number(v)
        return to_number(v)

    def _update(self, node: n.Update, scope: Scope) -> Any:
        target = node.argument
        delta = 1.0 if node.op == "++" else -1.0
        if isinstance(target, n.Identifier):
            old = to_number(self._identifier(target, scope))
            self.assign(target.name, old + delta, scope)
        elif isinstance(target, n.Member):
            obj = self.eval(target.object, scope)
            key = self._member_key(target, scope)
            old = to_number(self.get_prop(obj, key, target))
            self.set_prop(obj, key, old + delta, target)
        else:
            raise self.error("SyntaxError", "invalid update target", node)
        return old + delta if node.prefix else old

    # -- properties ------------------------------------------------------

    def get_prop(self, obj: Any, key: Any, node: Optional[n.Node] = None) -> Any:
        if isinstance(obj, JSArray):
            if isinstance(key, float):
                i = int(key)
                if i == key and 0 <= i < len(obj.items):
                    return obj.items[i]
                return UNDEFINED
            k = property_key(key)
            if k.isdigit():
                i = int(k)
                return obj.items[i] if i < len(obj.items) else UNDEFINED
            if k == "length":
                return float(len(obj.items))
            if k in obj.props:
                return obj.props[k]
            return builtins.array_method(obj, k)
        if isinstance(obj, str):
            k = property_key(key)
            if k == "length":
                return float(len(obj))
            if k.isdigit():
                i = int(k)
                return tag(obj[i], taint_of(obj)) if i < len(obj) else UNDEFINED
            return builtins.string_method(obj, k)
        if isinstance(obj, CALLABLE):
            k = property_key(key)
            if k in obj.props:
                return obj.props[k]
            return builtins.function_method(obj, k)
        if isinstance(obj, JSObject):
            return obj.get(property_key(key))
        if isinstance(obj, float):
            return builtins.number_method(obj, property_key(key))
        if isinstance(obj, bool):
            return builtins.bool_method(obj, property_key(key))
        raise self.error(
            "TypeError", f"cannot read property {to_string(key)!s} of {to_string(obj)}", node
        )

    def set_prop(self, obj: Any, key: Any, value: Any, node: Optional[n.Node] = None) -> None:
        if isinstance(obj, JSArray):
            k = property_key(key)
            if k.isdigit():
                i = int(k)
                if i >= len(obj.items):
                    if i - len(obj.items) > self.string_cap:
                        raise BudgetExhausted("array index beyond cap")
                    obj.items.extend([UNDEFINED] * (i + 1 - len(obj.items)))
                obj.items[i] = value
                return
            if k == "length":
                size = int(to_number(value))
                del obj.items[size:]
                obj.items.extend([UNDEFINED] * (size - len(obj.items)))
                return
            obj.props[k] = value
            return
        if isinstance(obj, JSObject):
            obj.set(property_key(key), value)
            return
        if obj is None or obj is UNDEFINED:
            raise self.error("TypeError", f"cannot set property {to_string(key)!s} of {to_string(obj)}", node)
        # writes to primitives are silently dropped

    # -- calls -----------------------------------------------------------

    def call(self, fn: Any, this: Any, args: list, node: Optional[n.Node] = None) -> Any:
        if isinstance(fn, HostFunction):
            return fn.fn(self, this, args)
        if not isinstance(fn, JSFunction):
            raise self.error("TypeError", f"{to_string(fn)} is not a function", node)
        if self.call_depth >= CALL_DEPTH_CAP:
            raise self.error("RangeError", "maximum call stack size exceeded", node)
        decl = fn.node
        scope = Scope(fn.closure, is_function=True)
        for i, p in enumerate(decl.params):
            scope.vars[p] = args[i] if i < len(args) else UNDEFINED
        scope.vars["arguments"] = JSArray(list(args))
        if isinstance(decl, n.FunctionExpr) and decl.name and decl.name not in scope.vars:
            scope.vars[decl.name] = fn
        self.hoist(decl, decl.body, scope)
        self.call_depth += 1
        try:
            for stmt in decl.body:
                self.exec(stmt, scope)
        except _Return as r:
            return r.value
        finally:
            self.call_depth -= 1
        return UNDEFINED

    # -- dynamic evaluation ----------------------------------------------

    def _indirect_eval(self, interp: "Interpreter", this: Any, args: list) -> Any:
        # called other than as a bare ``eval(...)``: runs in the realm's global scope
        return self.direct_eval(args[0] if args else UNDEFINED, self.host.global_scope(), "eval")

    def parse_code(self, code: str) -> n.Program:
        label = taint_of(code)
        key = str.__str__(code)
        if label is None:
            cached = self._parse_cache.get(key)
            if cached is not None:
                return cached
        try:
            program = parse_source(key, source_id=f"<eval:{self.host.realm_id}>", final_semicolon_optional=True)
        except (LexError, ParseError) as exc:
            raise self.error("SyntaxError", str(exc)) from None
        if label is not None:
            taint_literals(program, label)
        elif len(self._parse_cache) < 512:
            self._parse_cache[key] = program
        return program

    def direct_eval(self, arg: Any, scope: Scope, api: str) -> Any:
        """Intercepted dynamic evaluation: record the sink then run the code in ``scope``."""
        if not isinstance(arg, str):
            return arg
        self.host.record_sink(arg, api)
        if self.eval_depth >= EVAL_DEPTH_CAP:
            raise self.error("RangeError", f"eval nesting exceeds {EVAL_DEPTH_CAP}")
        program = self.parse_code(arg)
        self.eval_depth += 1
        try:
            return self.run_program(program, scope)
        finally:
            self.eval_depth -= 1

    @staticmethod
    def _describe(node: n.Node) -> str:
        if isinstance(node, n.Identifier):
            return node.name
        if isinstance(node, n.Member) and not node.computed:
            return f"{Interpreter._describe(node.object)}.{node.property}"
        return type(node).__name__
