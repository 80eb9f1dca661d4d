from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from implang.fuzzer import FuzzConfig, sample_program
from implang.runtime import Outcome, PopEmpty
from implang.sos import (
    CATEGORY_RANGES,
    RULE_NAMES,
    TERMINAL,
    applicable_rule,
    initial_configuration,
    rule_category,
    run,
    stack_pop,
    stack_push,
    stack_top,
    step,
)
from implang.syntax import While, BoolLit, parse


def test_rule_names_cover_catalog():
    assert sorted(RULE_NAMES) == list(range(1, 79))


def test_category_ranges_match_expected_counts():
    counts = {
        cat: sum(len(r) for r in ranges) for cat, ranges in CATEGORY_RANGES.items()
    }
    assert counts == {
        "Id": 2,
        "Declaration": 1,
        "Assignment": 3,
        "Arithmetic": 21,
        "Relational": 24,
        "Logical": 11,
        "Conditional": 3,
        "Loop": 5,
        "BreakContinue": 6,
        "Halt": 1,
    }
    # rule 63 belongs to no category
    assert rule_category(63) is None
    covered = {r for ranges in CATEGORY_RANGES.values() for rng in ranges for r in rng}
    assert covered == set(range(1, 79)) - {63}


def test_stack_metafunctions():
    w = While(BoolLit(True), ())
    chi = stack_push(w, ())
    assert chi == (w,)
    assert stack_top(chi) is w
    assert stack_pop(chi) == ()
    assert stack_top(()) is None
    with pytest.raises(PopEmpty):
        stack_pop(())


def test_trace_example_rule_sequence(trace_example):
    trace = run(trace_example)
    assert trace.rule_sequence() == [3, 3, 5, 67, 68, 28, 1, 30, 70, 78]
    assert trace.outcome is Outcome.HALTED
    assert trace.final_store == {"i": 0, "j": 0}


def test_rule_example_sequence(rule_example):
    trace = run(rule_example, store={"n": 100, "sum": 0})
    assert trace.rule_sequence() == [67, 68, 32, 1, 35, 69]
    assert trace.outcome is Outcome.NORMAL


def test_applicable_rule_examples(trace_example):
    c = initial_configuration(trace_example)
    assert applicable_rule(c) == 3
    _, c = step(c)
    _, c = step(c)
    assert applicable_rule(c) == 5  # literal rhs stores directly
    done = run(parse(""))
    assert done.rule_sequence() == []
    assert applicable_rule(initial_configuration(parse(""))) == TERMINAL


def test_empty_program_is_terminal():
    trace = run(parse(""))
    assert trace.outcome is Outcome.NORMAL and trace.steps == []


def test_division_by_zero_errors():
    trace = run(parse("int x;\nx = 1 / 0;\n"))
    assert trace.rule_sequence()[-1] == 19
    assert trace.outcome is Outcome.ERROR


def test_modulo_by_zero_errors():
    trace = run(parse("int x;\nx = 1 % 0;\n"))
    assert trace.rule_sequence()[-1] == 23
    assert trace.outcome is Outcome.ERROR


def test_truncating_division_and_modulo():
    src = "int a;\nint b;\nint c;\nint d;\na = 0 - 7;\nb = a / 2;\nc = a % 2;\nd = 7 / 2;\n"
    trace = run(parse(src))
    assert trace.final_store["b"] == -3  # toward zero, not floor
    assert trace.final_store["c"] == -1  # dividend's sign
    assert trace.final_store["d"] == 3


def test_undeclared_use_faults():
    trace = run(parse("int x;\nx = y + 1;\n"))
    assert trace.outcome is Outcome.ERROR
    assert trace.rule_sequence()[-1] == 63


def test_redeclaration_faults():
    trace = run(parse("int x;\nint x;\n"))
    assert trace.outcome is Outcome.ERROR
    assert trace.rule_sequence()[-1] == 63


def test_int_guard_faults():
    trace = run(parse("int x;\nwhile (x) { halt; };\n"))
    assert trace.outcome is Outcome.ERROR


def test_bool_variable_flow():
    src = "bool f;\nint x;\nf = 3 < 4;\nx = 1;\nif (f) { x = 2; } else { };\n"
    trace = run(parse(src))
    assert trace.final_store == {"f": True, "x": 2}
    seq = trace.rule_sequence()
    assert 6 in seq  # boolean store
    assert 2 in seq  # boolean id lookup


def test_short_circuit_and_skips_right():
    # false && (1/0 == 1) must not fault
    trace = run(parse("bool f;\nf = 3 > 4 && (1 / 0) == 1;\n"))
    assert trace.outcome is Outcome.NORMAL
    assert trace.final_store == {"f": False}


def test_short_circuit_or_skips_right():
    trace = run(parse("bool f;\nf = 3 < 4 || (1 / 0) == 1;\n"))
    assert trace.outcome is Outcome.NORMAL
    assert trace.final_store == {"f": True}


def test_break_pops_control_stack():
    src = "int i;\nwhile (true)\n{\n    break;\n    i = 9;\n};\n"
    trace = run(parse(src))
    assert trace.rule_sequence() == [3, 67, 70, 71, 72]
    assert trace.outcome is Outcome.NORMAL


def test_continue_rearms_loop():
    src = (
        "int i;\nint s;\nwhile (i < 3)\n{\n    i = i + 1;\n"
        "    continue;\n    s = 99;\n};\n"
    )
    trace = run(parse(src))
    assert trace.final_store == {"i": 3, "s": 0}
    seq = trace.rule_sequence()
    assert 74 in seq and 77 in seq and 73 in seq


def test_orphan_break_and_continue_error():
    assert run(parse("break;")).rule_sequence() == [75]
    assert run(parse("continue;")).rule_sequence() == [76]
    assert run(parse("break;")).outcome is Outcome.ERROR


def test_nested_break_exits_inner_loop_only():
    src = (
        "int i;\nint n;\nwhile (i < 2)\n{\n    i = i + 1;\n"
        "    while (true)\n    {\n        break;\n    };\n    n = n + 1;\n};\n"
    )
    trace = run(parse(src))
    assert trace.final_store == {"i": 2, "n": 2}
    assert trace.outcome is Outcome.NORMAL


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_store_hygiene_and_stack_balance(seed):
    """Only declaration/assignment rules touch the store; a normal outcome
    leaves the control stack empty; the last post-state is the final store."""
    p = sample_program(FuzzConfig(), f"sos-prop:{seed}")
    c = initial_configuration(p)
    prev_store = c.store
    last_store = c.store
    n = 0
    while not c.terminal and n < 60_000:
        rule, c = step(c)
        if rule in (3, 5, 6):
            pass
        elif not c.errored:
            assert c.store is prev_store or c.store == prev_store, (
                f"rule {rule} changed the store"
            )
        prev_store = c.store
        last_store = c.store
        n += 1
    if c.terminal and not (c.halted or c.errored):
        assert c.stack == ()
    trace = run(p, 60_000)
    if trace.outcome.terminated and trace.steps:
        assert trace.steps[-1].post_state == trace.final_store
