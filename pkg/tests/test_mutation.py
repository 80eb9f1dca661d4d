from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from implang.fuzzer import FuzzConfig, sample_program
from implang.mutation import (
    MutationKind,
    OPERATOR_SWAP,
    SemanticsStyle,
    check_equivalence,
    operator_actions,
    run_with,
    transform_program,
)
from implang.syntax import parse, render_program
from implang.tokens import OBFUSCATED, Tok


def test_swap_table_rows():
    assert OPERATOR_SWAP[Tok.ADD] is Tok.SUB
    assert OPERATOR_SWAP[Tok.MUL] is Tok.DIV
    assert OPERATOR_SWAP[Tok.LT] is Tok.GT
    assert OPERATOR_SWAP[Tok.LE] is Tok.GE
    assert OPERATOR_SWAP[Tok.EQ] is Tok.NE
    assert OPERATOR_SWAP[Tok.AND] is Tok.OR
    for fixed in (Tok.MOD, Tok.NOT, Tok.WHILE):
        assert fixed not in OPERATOR_SWAP


def test_swap_is_involution_on_full_token_set():
    actions = operator_actions(MutationKind.KEYWORD_SWAP)
    for tok in Tok:
        assert actions.get(actions[tok]) is tok


def test_transform_swap_emits_swapped_source():
    p = parse("int a;\na = a + 1;\n")
    swapped = transform_program(p, MutationKind.KEYWORD_SWAP)
    assert "a = a - 1;" in render_program(swapped)


def test_transform_is_involution():
    p = parse("int a;\nint b;\na = a * b + 1;\nwhile (a < 3 && b != 0) { a = a + 1; };\n")
    twice = transform_program(
        transform_program(p, MutationKind.KEYWORD_SWAP), MutationKind.KEYWORD_SWAP
    )
    assert twice == p


def test_obf_transform_is_identity_on_ast():
    p = parse("int a;\na = 1;\n")
    assert transform_program(p, MutationKind.KEYWORD_OBF) == p


def test_obf_render_round_trip():
    p = parse("int a;\nint b;\na = 2;\nwhile (a > 0) { a = a - 1; b = b + a; };\n")
    obf_src = render_program(p, OBFUSCATED)
    assert parse(obf_src, OBFUSCATED) == p


def test_swapped_execution_reproduces_gold(mbpp_program):
    for style in SemanticsStyle:
        base = run_with(mbpp_program, style, collect=False)
        swapped = run_with(
            transform_program(mbpp_program, MutationKind.KEYWORD_SWAP),
            style,
            MutationKind.KEYWORD_SWAP,
            collect=False,
        )
        assert swapped.final_store == base.final_store
        assert swapped.final_store["sum"] == 18


def test_check_equivalence_standard_is_trivial(mbpp_program):
    assert check_equivalence(mbpp_program, MutationKind.STANDARD)


@pytest.mark.parametrize("kind", [MutationKind.KEYWORD_SWAP, MutationKind.KEYWORD_OBF])
@pytest.mark.parametrize("style", list(SemanticsStyle))
def test_check_equivalence_mbpp(mbpp_program, kind, style):
    assert check_equivalence(mbpp_program, kind, style=style)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_check_equivalence_fuzzed(seed):
    p = sample_program(FuzzConfig(), f"mut:{seed}")
    for kind in (MutationKind.KEYWORD_SWAP, MutationKind.KEYWORD_OBF):
        assert check_equivalence(p, kind, step_limit=200_000)
