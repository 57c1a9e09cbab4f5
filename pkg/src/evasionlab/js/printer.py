"""Pretty printer.  Output reparses to a structurally equal tree."""

from __future__ import annotations

import re

from . import nodes as n
from .parser import BINARY_PRECEDENCE

_INDENT = "    "
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")

_PREC_ASSIGN = 0
_PREC_UNARY = 7
_PREC_POSTFIX = 8
_PREC_CALL = 9
_PREC_PRIMARY = 10

_ESCAPES = {
    "\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t",
    "\b": "\\b", "\f": "\\f", "\v": "\\v",
}
_NEEDS_ESCAPE = re.compile(r'[\\"\x00-\x1f\x7f\u2028\u2029\ud800-\udfff]')


def quote_string(value: str) -> str:
    def repl(m: re.Match) -> str:
        c = m.group()
        if c in _ESCAPES:
            return _ESCAPES[c]
        code = ord(c)
        if code < 0x100:
            return f"\\x{code:02x}"
        return f"\\u{code:04x}"

    return '"' + _NEEDS_ESCAPE.sub(repl, value) + '"'


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e21:
        return str(int(value))
    return repr(value)


def _precedence(node: n.Node) -> int:
    if isinstance(node, n.Assign):
        return _PREC_ASSIGN
    if isinstance(node, (n.Binary, n.Logical)):
        return BINARY_PRECEDENCE[node.op]
    if isinstance(node, n.Unary) or (isinstance(node, n.Update) and node.prefix):
        return _PREC_UNARY
    if isinstance(node, n.Update):
        return _PREC_POSTFIX
    if isinstance(node, (n.Call, n.Member, n.New)):
        return _PREC_CALL
    return _PREC_PRIMARY


def _has_call(node: n.Node) -> bool:
    while True:
        if isinstance(node, n.Call):
            return True
        if isinstance(node, n.Member):
            node = node.object
        else:
            return False


def _starts_ambiguously(node: n.Node) -> bool:
    """True when an expression statement would begin with '{' or 'function'."""
    while True:
        if isinstance(node, (n.ObjectLit, n.FunctionExpr)):
            return True
        if isinstance(node, n.Call):
            if isinstance(node.callee, n.FunctionExpr):
                return False  # callee already gets parenthesized
            node = node.callee
        elif isinstance(node, n.Member):
            if isinstance(node.object, n.FunctionExpr):
                return False
            node = node.object
        elif isinstance(node, (n.Binary, n.Logical)):
            node = node.left
        elif isinstance(node, n.Assign):
            node = node.target
        elif isinstance(node, n.Update) and not node.prefix:
            node = node.argument
        else:
            return False


class Printer:
    # -- expressions -----------------------------------------------------

    def expr(self, node: n.Node, min_prec: int = _PREC_ASSIGN, level: int = 0) -> str:
        text = self._expr(node, level)
        if _precedence(node) < min_prec:
            return f"({text})"
        return text

    def _expr(self, node: n.Node, level: int) -> str:
        if isinstance(node, n.Identifier):
            return node.name
        if isinstance(node, n.StringLit):
            return quote_string(node.value)
        if isinstance(node, n.NumberLit):
            return format_number(node.value)
        if isinstance(node, n.BoolLit):
            return "true" if node.value else "false"
        if isinstance(node, n.NullLit):
            return "null"
        if isinstance(node, n.ArrayLit):
            return "[" + ", ".join(self.expr(e, _PREC_ASSIGN, level) for e in node.elements) + "]"
        if isinstance(node, n.ObjectLit):
            if not node.properties:
                return "{}"
            inner = _INDENT * (level + 1)
            parts = [
                f"{inner}{self._key(p.key)}: {self.expr(p.value, _PREC_ASSIGN, level + 1)}"
                for p in node.properties
            ]
            return "{\n" + ",\n".join(parts) + "\n" + _INDENT * level + "}"
        if isinstance(node, n.FunctionExpr):
            name = f" {node.name}" if node.name else ""
            return f"function{name}({', '.join(node.params)}) " + self.body(node.body, level)
        if isinstance(node, n.Call):
            callee = self.expr(node.callee, _PREC_CALL, level)
            if isinstance(node.callee, n.FunctionExpr):
                callee = f"({callee})"
            return callee + self.args(node.args, level)
        if isinstance(node, n.New):
            callee = self.expr(node.callee, _PREC_CALL, level)
            if _has_call(node.callee) or isinstance(node.callee, n.New):
                callee = f"({callee})"
            return "new " + callee + self.args(node.args, level)
        if isinstance(node, n.Member):
            obj = self.expr(node.object, _PREC_CALL, level)
            if isinstance(node.object, (n.NumberLit, n.FunctionExpr)):
                obj = f"({obj})"
            if node.computed:
                return f"{obj}[{self.expr(node.property, _PREC_ASSIGN, level)}]"
            return f"{obj}.{node.property}"
        if isinstance(node, n.Assign):
            return f"{self.expr(node.target, _PREC_CALL, level)} {node.op} {self.expr(node.value, _PREC_ASSIGN, level)}"
        if isinstance(node, (n.Binary, n.Logical)):
            prec = BINARY_PRECEDENCE[node.op]
            left = self.expr(node.left, prec, level)
            right = self.expr(node.right, prec + 1, level)
            return f"{left} {node.op} {right}"
        if isinstance(node, n.Unary):
            arg = self.expr(node.argument, _PREC_UNARY, level)
            if node.op in "+-" and arg[:1] in "+-":
                arg = f"({arg})"
            return node.op + arg
        if isinstance(node, n.Update):
            if node.prefix:
                return node.op + self.expr(node.argument, _PREC_UNARY, level)
            return self.expr(node.argument, _PREC_CALL, level) + node.op
        raise TypeError(f"cannot print expression {type(node).__name__}")

    def args(self, args: list[n.Node], level: int) -> str:
        return "(" + ", ".join(self.expr(a, _PREC_ASSIGN, level) for a in args) + ")"

    @staticmethod
    def _key(key: str) -> str:
        return key if _IDENT_RE.match(key) else quote_string(key)

    # -- statements ------------------------------------------------------

    def body(self, stmts: list[n.Node], level: int) -> str:
        if not stmts:
            return "{}"
        inner = "\n".join(self.stmt(s, level + 1) for s in stmts)
        return "{\n" + inner + "\n" + _INDENT * level + "}"

    def var_decl(self, node: n.VarDecl, level: int) -> str:
        parts = []
        for d in node.declarations:
            if d.init is None:
                parts.append(d.name)
            else:
                parts.append(f"{d.name} = {self.expr(d.init, _PREC_ASSIGN, level)}")
        return f"{node.kind} " + ", ".join(parts)

    def nested(self, node: n.Node, level: int) -> str:
        """Render a statement used as a loop/if body."""
        if isinstance(node, n.Block):
            return " " + self.body(node.body, level)
        return "\n" + self.stmt(node, level + 1)

    def stmt(self, node: n.Node, level: int) -> str:
        pad = _INDENT * level
        if isinstance(node, n.VarDecl):
            return pad + self.var_decl(node, level) + ";"
        if isinstance(node, n.FunctionDecl):
            return pad + f"function {node.name}({', '.join(node.params)}) " + self.body(node.body, level)
        if isinstance(node, n.ExprStmt):
            text = self.expr(node.expression, _PREC_ASSIGN, level)
            if _starts_ambiguously(node.expression):
                text = f"({text})"
            return pad + text + ";"
        if isinstance(node, n.Return):
            if node.argument is None:
                return pad + "return;"
            return pad + "return " + self.expr(node.argument, _PREC_ASSIGN, level) + ";"
        if isinstance(node, n.If):
            out = pad + f"if ({self.expr(node.test, _PREC_ASSIGN, level)})" + self.nested(node.consequent, level)
            if node.alternate is not None:
                if isinstance(node.consequent, n.Block):
                    out += " else"
                else:
                    out += "\n" + pad + "else"
                if isinstance(node.alternate, n.If):
                    out += " " + self.stmt(node.alternate, level).lstrip()
                else:
                    out += self.nested(node.alternate, level)
            return out
        if isinstance(node, n.For):
            if node.init is None:
                init = ""
            elif isinstance(node.init, n.VarDecl):
                init = self.var_decl(node.init, level)
            else:
                init = self.expr(node.init, _PREC_ASSIGN, level)
            test = "" if node.test is None else " " + self.expr(node.test, _PREC_ASSIGN, level)
            update = "" if node.update is None else " " + self.expr(node.update, _PREC_ASSIGN, level)
            return pad + f"for ({init};{test};{update})" + self.nested(node.body, level)
        if isinstance(node, n.While):
            return pad + f"while ({self.expr(node.test, _PREC_ASSIGN, level)})" + self.nested(node.body, level)
        if isinstance(node, n.Block):
            return pad + self.body(node.body, level)
        if isinstance(node, n.Empty):
            return pad + ";"
        raise TypeError(f"cannot print statement {type(node).__name__}")


def print_ast(node: n.Node) -> str:
    """Render a Program (or any statement/expression node) as source text."""
    p = Printer()
    if isinstance(node, n.Program):
        if not node.body:
            return ""
        return "\n".join(p.stmt(s, 0) for s in node.body) + "\n"
    if isinstance(node, n.EXPRESSION_TYPES):
        return p.expr(node)
    return p.stmt(node, 0)
