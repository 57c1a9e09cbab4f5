import pytest
from hypothesis import given, settings, strategies as st

from evasionlab.js import (
    LexError, ParseError, SourceFile, is_call_to, nodes as n, parse_source, print_ast, query, tokenize,
)

from fixtures import SPRAY_LOOP, TRIGGER


def kinds(source):
    return [(t.kind, t.lexeme) for t in tokenize(source) if t.kind != "eof"]


def test_tokenize_minimal_program():
    assert kinds("var x = 1;") == [("keyword", "var"), ("ident", "x"), ("punct", "="), ("num", "1"), ("punct", ";")]


def test_hex_literal_is_one_number_token():
    toks = [t for t in tokenize("0x320") if t.kind != "eof"]
    assert len(toks) == 1 and toks[0].kind == "num" and toks[0].value == 800


def test_illegal_character_raises_with_offset():
    with pytest.raises(LexError) as exc:
        tokenize("@@")
    assert exc.value.span.start_offset == 0


def test_lexemes_and_trivia_reconstruct_source():
    src = "/* c */ var a = 'x'; // end\nb += a;"
    toks = [t for t in tokenize(src) if t.kind != "eof"]
    pos, rebuilt = 0, []
    for t in toks:
        assert t.span.start_offset >= pos
        rebuilt.append(src[pos:t.span.start_offset])
        rebuilt.append(t.lexeme)
        pos = t.span.end_offset
    rebuilt.append(src[pos:])
    assert "".join(rebuilt) == src


def test_reserved_word_as_property_name():
    stmt = parse_source("result.continue();").body[0]
    call = stmt.expression
    assert call == n.Call(n.Member(n.Identifier("result"), "continue"), [])


def test_assign_null_to_member():
    stmt = parse_source("ATTR.value = null;").body[0]
    assert stmt.expression == n.Assign("=", n.Member(n.Identifier("ATTR"), "value"), n.NullLit())


def test_missing_expression_is_parse_error():
    with pytest.raises(ParseError) as exc:
        parse_source("var x = ;")
    assert "expression" in str(exc.value)


def test_no_automatic_semicolon_insertion():
    with pytest.raises(ParseError):
        parse_source("var x = 1\nvar y = 2;")


def test_print_roundtrip_simple():
    ast = parse_source("var x=1;")
    assert parse_source(print_ast(ast)) == ast


def test_empty_program_prints_empty():
    assert print_ast(parse_source("")) == ""


@pytest.mark.parametrize("src", [
    "var s = 'it\\'s \"quoted\"';",
    "(function () { return 1; })();",
    "var f = function () {};",
    "x = -(-y);",
    "new (a.b())();",
    "new a.b();",
    "(1).toString();",
    "if (a) b(); else if (c) d(); else { e(); }",
    "for (;;) {}",
    "while (!!x == false) x = !x;",
    "var o = {a: 1, 'b c': [1, 2, {}]};",
    "i++; --j; k += 0x10;",
])
def test_print_roundtrip_cases(src):
    ast = parse_source(src)
    assert parse_source(print_ast(ast)) == ast


def test_query_finds_the_spray_eval():
    assert len(query(parse_source(SPRAY_LOOP), is_call_to("eval"))) == 1


def test_query_counts_trigger_unescapes():
    assert len(query(parse_source(TRIGGER), is_call_to("unescape"))) == 3


def test_query_on_empty_program():
    assert query(parse_source(""), lambda node: not isinstance(node, n.Program)) == []


def test_query_returns_source_order():
    found = query(parse_source("a(); b(c());"), lambda x: isinstance(x, n.Call))
    names = [f.callee.name for f in found]
    assert names == ["a", "b", "c"]


def test_span_soundness_on_corpus(manifest):
    for s in manifest.samples:
        src = s.host_body
        prog = parse_source(src)
        for node in query(prog, lambda x: isinstance(x, (n.Call, n.StringLit, n.Binary))):
            text = node.span.text(src)
            sub = [t.lexeme for t in tokenize(text) if t.kind != "eof"]
            whole = [t.lexeme for t in tokenize(src) if t.kind != "eof"
                     and node.span.start_offset <= t.span.start_offset < node.span.end_offset]
            assert sub == whole


def test_source_file_rejects_unknown_role():
    with pytest.raises(ValueError):
        SourceFile("x.js", "", "style")


string_values = st.text(
    alphabet=st.characters(min_codepoint=0, max_codepoint=0x10FFFF, blacklist_categories=("Cs",)),
    max_size=40,
)


@settings(max_examples=300, deadline=None)
@given(string_values)
def test_string_literal_roundtrip_property(value):
    ast = n.Program([n.ExprStmt(n.StringLit(value))])
    again = parse_source(print_ast(ast))
    assert again == ast


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=2**31), min_size=1, max_size=5))
def test_number_literal_roundtrip_property(values):
    ast = n.Program([n.ExprStmt(n.ArrayLit([n.NumberLit(float(v)) for v in values]))])
    assert parse_source(print_ast(ast)) == ast
