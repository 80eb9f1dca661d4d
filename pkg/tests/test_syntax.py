from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from implang.fuzzer import FuzzConfig, sample_program
from implang.syntax import (
    Arith,
    Assign,
    Id,
    IntLit,
    Paren,
    ParseError,
    UnknownLexeme,
    parse,
    render_expr,
    render_program,
    tokenize,
)
from implang.tokens import OBFUSCATED, STANDARD, Tok


def kinds_and_texts(lexemes):
    return [(l.kind, l.tok if l.kind == "tok" else l.text) for l in lexemes]


def test_tokenize_assignment_statement():
    lx = tokenize("a = a + 1;", STANDARD)
    assert kinds_and_texts(lx) == [
        ("id", "a"),
        ("tok", Tok.ASSIGN),
        ("id", "a"),
        ("tok", Tok.ADD),
        ("int", "1"),
        ("tok", Tok.SEMI),
    ]


def test_tokenize_obfuscated_addition():
    lx = tokenize("x\U00010550y", OBFUSCATED)
    assert kinds_and_texts(lx) == [("id", "x"), ("tok", Tok.ADD), ("id", "y")]


def test_tokenize_unknown_lexeme_position():
    with pytest.raises(UnknownLexeme) as exc:
        tokenize("a @ b", STANDARD)
    assert exc.value.col == 3


def test_tokenize_records_positions():
    lx = tokenize("int a;\na = 1;", STANDARD)
    assert (lx[0].pos.line, lx[0].pos.col) == (1, 1)
    assert (lx[3].pos.line, lx[3].pos.col) == (2, 1)


def test_longest_match_relational():
    lx = tokenize("a <= b < c == d", STANDARD)
    ops = [l.tok for l in lx if l.kind == "tok"]
    assert ops == [Tok.LE, Tok.LT, Tok.EQ]


def test_keyword_vs_identifier():
    lx = tokenize("whilex = 1;", STANDARD)
    assert lx[0].kind == "id" and lx[0].text == "whilex"


def test_parse_precedence():
    p = parse("int a; a = 1+2*3;")
    assign = p.body[1]
    assert isinstance(assign, Assign)
    assert assign.expr == Arith(Tok.ADD, IntLit(1), Arith(Tok.MUL, IntLit(2), IntLit(3)))


def test_parse_bare_id_guard_is_accepted():
    # the grammar allows an identifier in boolean position; typing is deferred
    p = parse("while (x) { };")
    assert isinstance(p.body[0].guard, Id)


def test_parse_error_reports_expected():
    with pytest.raises(ParseError) as exc:
        parse("int ;")
    assert "identifier" in str(exc.value)


def test_parse_error_on_chained_relational():
    with pytest.raises(ParseError):
        parse("int a; a = 1 < 2 < 3;")


def test_canonical_render_spacing():
    assert render_program(parse("a=1;")) == "a = 1;\n"


def test_render_obfuscated_addition():
    expr = Arith(Tok.ADD, Id("x"), Id("y"))
    assert render_expr(expr, OBFUSCATED) == "x \U00010550 y"


def test_render_while_terminator():
    src = render_program(parse("while (x) { halt; };"))
    assert src.endswith("};\n")
    assert "    halt;" in src


def test_round_trip_mbpp(mbpp_source):
    p = parse(mbpp_source)
    assert render_program(p) == mbpp_source
    assert parse(render_program(p)) == p


def test_profile_independence(mbpp_program):
    obf = render_program(mbpp_program, OBFUSCATED)
    assert parse(obf, OBFUSCATED) == mbpp_program


def test_unary_minus_parses():
    p = parse("int a; a = -5 + 3;")
    rendered = render_program(p)
    assert "a = -5 + 3;" in rendered
    assert parse(rendered) == p


def test_paren_nodes_survive_round_trip():
    p = parse("int a; a = (1 + 2) * 3;")
    assign = p.body[1]
    assert isinstance(assign.expr, Arith)
    assert isinstance(assign.expr.left, Paren)
    assert parse(render_program(p)) == p


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_round_trip_fuzzed_programs(seed):
    p = sample_program(FuzzConfig(), f"syntax-rt:{seed}")
    for profile in (STANDARD, OBFUSCATED):
        assert parse(render_program(p, profile), profile) == p


def test_profile_must_be_total_and_injective():
    from implang.tokens import LexemeProfile, _STANDARD_SURFACES

    with pytest.raises(ValueError):
        LexemeProfile("partial", {Tok.ADD: "+"})
    clashing = dict(_STANDARD_SURFACES)
    clashing[Tok.SUB] = "+"
    with pytest.raises(ValueError):
        LexemeProfile("clash", clashing)
