"""Tokenizer for the JavaScript subset."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .source import SourceFile, SourceSpan

# Every ES5 reserved word lexes as a keyword; the parser rejects the ones the
# subset does not support, but still accepts them as property names.
KEYWORDS = frozenset(
    """
    break case catch class const continue debugger default delete do else enum
    export extends false finally for function if import in instanceof new null
    return super switch this throw true try typeof var void while with
    """.split()
)

PUNCTUATORS = (
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "<", ">", "+", "-", "*", "/",
    "%", "!", "=", ":", "?",
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v\u00a0\ufeff\u2028\u2029]+)
  | (?P<line_comment>//[^\n\r\u2028\u2029]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<num>0[xX][0-9a-fA-F]+|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<str>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<punct>"""
    + "|".join(re.escape(p) for p in PUNCTUATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)

_TRIVIA = frozenset({"ws", "line_comment", "block_comment"})

_SIMPLE_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v", "0": "\0",
}


class LexError(ValueError):
    def __init__(self, message: str, span: SourceSpan) -> None:
        super().__init__(f"{message} at offset {span.start_offset}")
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | num | str | punct | eof
    lexeme: str
    span: SourceSpan
    value: object = None

    def is_punct(self, lexeme: str) -> bool:
        return self.kind == "punct" and self.lexeme == lexeme

    def is_keyword(self, lexeme: str) -> bool:
        return self.kind == "keyword" and self.lexeme == lexeme


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]
    source: str
    source_id: str = ""

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def significant(self) -> list[Token]:
        return [t for t in self.tokens if t.kind != "eof"]

    def trivia(self) -> list[str]:
        """Text between consecutive tokens, including leading and trailing trivia."""
        out, pos = [], 0
        for t in self.tokens:
            out.append(self.source[pos : t.span.start_offset])
            pos = t.span.end_offset
        return out


def decode_string(lexeme: str) -> str:
    body = lexeme[1:-1]
    if "\\" not in body:
        return body
    out: list[str] = []
    i, n = 0, len(body)
    while i < n:
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        e = body[i + 1]
        if e in _SIMPLE_ESCAPES and not (e == "0" and i + 2 < n and body[i + 2].isdigit()):
            out.append(_SIMPLE_ESCAPES[e])
            i += 2
        elif e == "x" and re.fullmatch(r"[0-9a-fA-F]{2}", body[i + 2 : i + 4]):
            out.append(chr(int(body[i + 2 : i + 4], 16)))
            i += 4
        elif e == "u" and re.fullmatch(r"[0-9a-fA-F]{4}", body[i + 2 : i + 6]):
            out.append(chr(int(body[i + 2 : i + 6], 16)))
            i += 6
        elif e in "\r\n\u2028\u2029":
            # line continuation
            i += 3 if body[i + 1 : i + 3] == "\r\n" else 2
        else:
            out.append(e)
            i += 2
    return "".join(out)


def parse_number(lexeme: str) -> float:
    if lexeme[:2] in ("0x", "0X"):
        return float(int(lexeme, 16))
    return float(lexeme)


def tokenize(source: SourceFile | str, source_id: str = "") -> TokenStream:
    """Split ``source`` into tokens, skipping whitespace and comments."""
    if isinstance(source, SourceFile):
        text, source_id = source.body, source.id
    else:
        text = source
    tokens: list[Token] = []
    pos, n = 0, len(text)
    match = _TOKEN_RE.match
    while pos < n:
        m = match(text, pos)
        if m is None:
            if text.startswith("/*", pos):
                raise LexError("unterminated comment", SourceSpan(pos, n, source_id))
            if text[pos] in "\"'":
                raise LexError("unterminated string literal", SourceSpan(pos, n, source_id))
            raise LexError(
                f"illegal character {text[pos]!r}", SourceSpan(pos, pos + 1, source_id)
            )
        kind = m.lastgroup
        end = m.end()
        if kind not in _TRIVIA:
            lexeme = m.group()
            span = SourceSpan(pos, end, source_id)
            if kind == "num":
                if end < n and (text[end].isalnum() or text[end] in "_$"):
                    raise LexError("identifier directly after number", SourceSpan(end, end + 1, source_id))
                tokens.append(Token("num", lexeme, span, parse_number(lexeme)))
            elif kind == "str":
                tokens.append(Token("str", lexeme, span, decode_string(lexeme)))
            elif kind == "ident":
                tokens.append(Token("keyword" if lexeme in KEYWORDS else "ident", lexeme, span))
            else:
                tokens.append(Token("punct", lexeme, span))
        pos = end
    tokens.append(Token("eof", "", SourceSpan(n, n, source_id)))
    return TokenStream(tuple(tokens), text, source_id)
