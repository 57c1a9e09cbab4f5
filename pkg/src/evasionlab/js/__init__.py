"""Tokenizer, parser, printer and queries for the JavaScript subset."""

from . import nodes
from .parser import ParseError, parse, parse_expression, parse_source
from .printer import print_ast, quote_string
from .query import callee_name, find_function, is_call_to, is_method_call, query
from .source import FileSet, SourceFile, SourceSpan
from .tokens import LexError, Token, TokenStream, tokenize


def roundtrip(source: str) -> nodes.Program:
    """Parse, print and reparse ``source``; returns the reparsed tree."""
    return parse_source(print_ast(parse_source(source)))


__all__ = [
    "FileSet", "LexError", "ParseError", "SourceFile", "SourceSpan", "Token",
    "TokenStream", "callee_name", "find_function", "is_call_to", "is_method_call",
    "nodes", "parse", "parse_expression", "parse_source", "print_ast", "query",
    "quote_string", "roundtrip", "tokenize",
]
