"""Recursive-descent parser for the JavaScript subset.

No automatic semicolon insertion: every statement that needs a terminator
must carry one.
"""

from __future__ import annotations

from . import nodes as n
from .source import SourceFile, SourceSpan
from .tokens import Token, TokenStream, tokenize

# binary operator -> precedence; higher binds tighter
BINARY_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3, "===": 3, "!==": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
LOGICAL_OPS = frozenset({"&&", "||"})
ASSIGN_OPS = frozenset({"=", "+=", "-="})

_UNSUPPORTED_STATEMENTS = frozenset(
    {"break", "continue", "switch", "try", "throw", "do", "with", "class", "debugger"}
)


class ParseError(SyntaxError):
    def __init__(self, expected: str, found: Token) -> None:
        shown = found.lexeme or "end of input"
        super().__init__(f"expected {expected}, found {shown!r} at offset {found.span.start_offset}")
        self.expected = expected
        self.found = found
        self.span = found.span


class Parser:
    def __init__(self, stream: TokenStream, final_semicolon_optional: bool = False) -> None:
        self.tokens = stream.tokens
        self.source_id = stream.source_id
        self.i = 0
        # dynamically evaluated snippets like "var x=1" may omit the last ';'
        self.final_semicolon_optional = final_semicolon_optional

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at_punct(self, lexeme: str) -> bool:
        t = self.tokens[self.i]
        return t.kind == "punct" and t.lexeme == lexeme

    def at_keyword(self, lexeme: str) -> bool:
        t = self.tokens[self.i]
        return t.kind == "keyword" and t.lexeme == lexeme

    def expect_punct(self, lexeme: str) -> Token:
        if not self.at_punct(lexeme):
            raise ParseError(repr(lexeme), self.tok)
        return self.advance()

    def end_statement(self) -> None:
        if self.final_semicolon_optional and self.tok.kind == "eof":
            return
        self.expect_punct(";")

    def expect_ident(self) -> str:
        if self.tok.kind != "ident":
            raise ParseError("identifier", self.tok)
        return self.advance().lexeme

    def span_from(self, start: Token) -> SourceSpan:
        end = self.tokens[self.i - 1].span.end_offset if self.i else start.span.end_offset
        return SourceSpan(start.span.start_offset, max(end, start.span.start_offset), self.source_id)

    # -- program and statements ------------------------------------------

    def parse_program(self) -> n.Program:
        start = self.tok
        body = []
        while self.tok.kind != "eof":
            body.append(self.statement())
        if not body:
            return n.Program(body, span=SourceSpan(0, 0, self.source_id))
        return n.Program(body, span=self.span_from(start))

    def statement(self) -> n.Node:
        t = self.tok
        if t.kind == "punct":
            if t.lexeme == "{":
                return self.block()
            if t.lexeme == ";":
                self.advance()
                return n.Empty(span=self.span_from(t))
        elif t.kind == "keyword":
            kw = t.lexeme
            if kw in ("var", "const"):
                decl = self.var_decl()
                self.end_statement()
                decl.span = self.span_from(t)
                return decl
            if kw == "function":
                return self.function_decl()
            if kw == "if":
                return self.if_stmt()
            if kw == "for":
                return self.for_stmt()
            if kw == "while":
                return self.while_stmt()
            if kw == "return":
                self.advance()
                arg = None
                if not self.at_punct(";") and self.tok.kind != "eof":
                    arg = self.expression()
                self.end_statement()
                return n.Return(arg, span=self.span_from(t))
            if kw in _UNSUPPORTED_STATEMENTS:
                raise ParseError(f"supported statement (not {kw!r})", t)
        expr = self.expression()
        self.end_statement()
        return n.ExprStmt(expr, span=self.span_from(t))

    def block(self) -> n.Block:
        start = self.expect_punct("{")
        body = []
        while not self.at_punct("}"):
            if self.tok.kind == "eof":
                raise ParseError("'}'", self.tok)
            body.append(self.statement())
        self.advance()
        return n.Block(body, span=self.span_from(start))

    def function_body(self) -> list[n.Node]:
        return self.block().body

    def params(self) -> list[str]:
        self.expect_punct("(")
        names: list[str] = []
        if not self.at_punct(")"):
            names.append(self.expect_ident())
            while self.at_punct(","):
                self.advance()
                names.append(self.expect_ident())
        self.expect_punct(")")
        return names

    def function_decl(self) -> n.FunctionDecl:
        start = self.advance()
        name = self.expect_ident()
        params = self.params()
        body = self.function_body()
        return n.FunctionDecl(name, params, body, span=self.span_from(start))

    def var_decl(self) -> n.VarDecl:
        start = self.advance()
        decls = [self.declarator()]
        while self.at_punct(","):
            self.advance()
            decls.append(self.declarator())
        return n.VarDecl(start.lexeme, decls, span=self.span_from(start))

    def declarator(self) -> n.Declarator:
        start = self.tok
        name = self.expect_ident()
        init = None
        if self.at_punct("="):
            self.advance()
            init = self.assignment()
        return n.Declarator(name, init, span=self.span_from(start))

    def if_stmt(self) -> n.If:
        start = self.advance()
        self.expect_punct("(")
        test = self.expression()
        self.expect_punct(")")
        cons = self.statement()
        alt = None
        if self.at_keyword("else"):
            self.advance()
            alt = self.statement()
        return n.If(test, cons, alt, span=self.span_from(start))

    def for_stmt(self) -> n.For:
        start = self.advance()
        self.expect_punct("(")
        init = None
        if not self.at_punct(";"):
            if self.at_keyword("var") or self.at_keyword("const"):
                init = self.var_decl()
            else:
                init = self.expression()
        self.expect_punct(";")
        test = None if self.at_punct(";") else self.expression()
        self.expect_punct(";")
        update = None if self.at_punct(")") else self.expression()
        self.expect_punct(")")
        body = self.statement()
        return n.For(init, test, update, body, span=self.span_from(start))

    def while_stmt(self) -> n.While:
        start = self.advance()
        self.expect_punct("(")
        test = self.expression()
        self.expect_punct(")")
        body = self.statement()
        return n.While(test, body, span=self.span_from(start))

    # -- expressions -----------------------------------------------------

    def expression(self) -> n.Node:
        return self.assignment()

    def assignment(self) -> n.Node:
        start = self.tok
        left = self.binary(1)
        t = self.tok
        if t.kind == "punct" and t.lexeme in ASSIGN_OPS:
            if not isinstance(left, (n.Identifier, n.Member)):
                raise ParseError("assignable target before " + repr(t.lexeme), t)
            self.advance()
            value = self.assignment()
            return n.Assign(t.lexeme, left, value, span=self.span_from(start))
        return left

    def binary(self, min_prec: int) -> n.Node:
        start = self.tok
        left = self.unary()
        while True:
            t = self.tok
            prec = BINARY_PRECEDENCE.get(t.lexeme) if t.kind == "punct" else None
            if prec is None or prec < min_prec:
                return left
            self.advance()
            right = self.binary(prec + 1)
            cls = n.Logical if t.lexeme in LOGICAL_OPS else n.Binary
            left = cls(t.lexeme, left, right, span=self.span_from(start))

    def unary(self) -> n.Node:
        t = self.tok
        if t.kind == "punct":
            if t.lexeme in ("!", "-", "+"):
                self.advance()
                arg = self.unary()
                return n.Unary(t.lexeme, arg, span=self.span_from(t))
            if t.lexeme in ("++", "--"):
                self.advance()
                arg = self.unary()
                self._check_update_target(arg, t)
                return n.Update(t.lexeme, True, arg, span=self.span_from(t))
        elif t.kind == "keyword" and t.lexeme in ("typeof", "void", "delete"):
            raise ParseError(f"supported operator (not {t.lexeme!r})", t)
        return self.postfix()

    def _check_update_target(self, arg: n.Node, op: Token) -> None:
        if not isinstance(arg, (n.Identifier, n.Member)):
            raise ParseError("assignable operand for " + repr(op.lexeme), op)

    def postfix(self) -> n.Node:
        start = self.tok
        expr = self.call_member()
        t = self.tok
        if t.kind == "punct" and t.lexeme in ("++", "--"):
            self._check_update_target(expr, t)
            self.advance()
            return n.Update(t.lexeme, False, expr, span=self.span_from(start))
        return expr

    def arguments(self) -> list[n.Node]:
        self.expect_punct("(")
        args: list[n.Node] = []
        if not self.at_punct(")"):
            args.append(self.assignment())
            while self.at_punct(","):
                self.advance()
                args.append(self.assignment())
        self.expect_punct(")")
        return args

    def property_name(self) -> str:
        t = self.tok
        if t.kind in ("ident", "keyword"):
            self.advance()
            return t.lexeme
        raise ParseError("property name", t)

    def member_tail(self, expr: n.Node, start: Token, allow_call: bool) -> n.Node:
        while True:
            if self.at_punct("."):
                self.advance()
                expr = n.Member(expr, self.property_name(), False, span=self.span_from(start))
            elif self.at_punct("["):
                self.advance()
                prop = self.expression()
                self.expect_punct("]")
                expr = n.Member(expr, prop, True, span=self.span_from(start))
            elif allow_call and self.at_punct("("):
                args = self.arguments()
                expr = n.Call(expr, args, span=self.span_from(start))
            else:
                return expr

    def call_member(self) -> n.Node:
        start = self.tok
        if self.at_keyword("new"):
            self.advance()
            if self.at_keyword("new"):
                raise ParseError("constructor (nested 'new' unsupported)", self.tok)
            cstart = self.tok
            callee = self.member_tail(self.primary(), cstart, allow_call=False)
            args = self.arguments() if self.at_punct("(") else []
            expr: n.Node = n.New(callee, args, span=self.span_from(start))
        else:
            expr = self.primary()
        return self.member_tail(expr, start, allow_call=True)

    def primary(self) -> n.Node:
        t = self.tok
        kind = t.kind
        if kind == "ident":
            self.advance()
            return n.Identifier(t.lexeme, span=t.span)
        if kind == "num":
            self.advance()
            return n.NumberLit(t.value, span=t.span)
        if kind == "str":
            self.advance()
            return n.StringLit(t.value, span=t.span)
        if kind == "keyword":
            if t.lexeme in ("true", "false"):
                self.advance()
                return n.BoolLit(t.lexeme == "true", span=t.span)
            if t.lexeme == "null":
                self.advance()
                return n.NullLit(span=t.span)
            if t.lexeme == "function":
                self.advance()
                name = self.advance().lexeme if self.tok.kind == "ident" else None
                params = self.params()
                body = self.function_body()
                return n.FunctionExpr(name, params, body, span=self.span_from(t))
        if kind == "punct":
            if t.lexeme == "(":
                self.advance()
                inner = self.expression()
                self.expect_punct(")")
                return inner
            if t.lexeme == "[":
                return self.array_literal()
            if t.lexeme == "{":
                return self.object_literal()
        raise ParseError("expression", t)

    def array_literal(self) -> n.ArrayLit:
        start = self.advance()
        elements: list[n.Node] = []
        while not self.at_punct("]"):
            elements.append(self.assignment())
            if not self.at_punct("]"):
                self.expect_punct(",")
        self.advance()
        return n.ArrayLit(elements, span=self.span_from(start))

    def object_literal(self) -> n.ObjectLit:
        start = self.advance()
        props: list[n.Property] = []
        while not self.at_punct("}"):
            kt = self.tok
            if kt.kind in ("ident", "keyword"):
                key = kt.lexeme
            elif kt.kind == "str":
                key = kt.value
            elif kt.kind == "num":
                v = kt.value
                key = str(int(v)) if v == int(v) else repr(v)
            else:
                raise ParseError("property key", kt)
            self.advance()
            self.expect_punct(":")
            value = self.assignment()
            props.append(n.Property(key, value, span=self.span_from(kt)))
            if not self.at_punct("}"):
                self.expect_punct(",")
        self.advance()
        return n.ObjectLit(props, span=self.span_from(start))


def parse(tokens: TokenStream, final_semicolon_optional: bool = False) -> n.Program:
    """Parse a token stream into a Program."""
    return Parser(tokens, final_semicolon_optional).parse_program()


def parse_source(source: SourceFile | str, source_id: str = "", final_semicolon_optional: bool = False) -> n.Program:
    return parse(tokenize(source, source_id), final_semicolon_optional)


def parse_expression(text: str) -> n.Node:
    p = Parser(tokenize(text))
    expr = p.expression()
    if p.tok.kind != "eof":
        raise ParseError("end of expression", p.tok)
    return expr
