from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from implang.fuzzer import FuzzConfig, sample_program
from implang.metrics import (
    cyclomatic_complexity,
    dep_degree,
    dynamic_metrics,
    halstead,
    nesting_depths,
    profile,
    static_metrics,
)
from implang.runtime import RequiresTermination
from implang.sos import run
from implang.syntax import parse


MBPP_EXPECTED = {
    "cc": 3,
    "max_nested_if": 1,
    "max_nested_loop": 1,
    "taken_if_depth": 1,
    "taken_loop_depth": 1,
    "dep_degree": 12,
    "executed_assignments": 12,
    "loc": 19,
    "halstead_vocabulary": 23,
    "trace_length": 29,
}


def test_mbpp_962_profile(mbpp_program):
    prof = profile(mbpp_program)
    for key, expected in MBPP_EXPECTED.items():
        assert getattr(prof, key) == expected, key
    assert round(prof.halstead_volume) == 294
    assert abs(prof.halstead_volume - 294) / 294 <= 0.05


def test_trivial_program_metrics():
    prof_src = "int a;\na = 1;\n"
    stat = static_metrics(parse(prof_src))
    assert stat.cc == 1
    assert stat.max_nested_if == 0 and stat.max_nested_loop == 0
    assert stat.dep_degree == 0  # the only use-free assignment


def test_empty_program_profile():
    prof = profile(parse(""))
    assert prof.cc == 1
    assert prof.loc == 0
    assert prof.trace_length == 0 and prof.trace_length_micro == 0
    assert prof.dep_degree == 0


def test_cc_counts_short_circuit_operators():
    p = parse("bool f;\nf = 1 < 2 && 3 < 4 || false;\n")
    assert cyclomatic_complexity(p) == 3  # 1 + && + ||


def test_nesting_depths_count_kinds_separately():
    src = (
        "int a;\nwhile (a < 1)\n{\n    if (a < 1)\n    {\n"
        "        while (a < 1)\n        {\n            a = 1;\n        };\n"
        "    }\n    else\n    {\n    };\n};\n"
    )
    max_if, max_loop = nesting_depths(parse(src))
    assert max_if == 1 and max_loop == 2


def test_straight_line_dynamic_metrics():
    p = parse("int a;\nint b;\na = 1;\nb = 2;\n")
    dyn = dynamic_metrics(p, run(p))
    assert dyn.executed_assignments == 2
    assert dyn.taken_if_depth == 0 and dyn.taken_loop_depth == 0
    assert dyn.trace_length == 4  # 2 decls + 2 stores


def test_noop_assignment_not_counted_as_executed():
    # a declaration already zeroes the variable, so a = 0 changes nothing
    p = parse("int a;\na = 0;\n")
    dyn = dynamic_metrics(p, run(p))
    assert dyn.executed_assignments == 0
    assert dyn.trace_length == 2  # but the step still counts in the trace


def test_dynamic_requires_termination():
    p = parse("int x;\nx = 1 / 0;\n")
    with pytest.raises(RequiresTermination):
        dynamic_metrics(p, run(p))


def test_halstead_volume_monotone_under_duplication():
    base = parse("int a;\na = a + 1;\n")
    doubled = parse("int a;\na = a + 1;\na = a + 1;\n")
    n1, v1 = halstead(base)
    n2, v2 = halstead(doubled)
    assert n2 == n1  # same vocabulary
    assert v2 > v1  # more tokens, same vocabulary


def test_dep_degree_invariant_under_renaming():
    src = "int a;\nint b;\na = 1;\nb = a + a;\nwhile (b > 0) { b = b - 1; };\n"
    renamed = src.replace("a", "xx").replace("b", "yy")
    assert dep_degree(parse(src)) == dep_degree(parse(renamed))
    assert dep_degree(parse(src)) > 0


def test_dep_degree_counts_loop_carried_defs():
    src = "int i;\ni = 0;\nwhile (i < 3)\n{\n    i = i + 1;\n};\n"
    # guard i: {i=0, i=i+1}; body i: {i=0, i=i+1}
    assert dep_degree(parse(src)) == 4


def test_trace_granularities_ordering(mbpp_program):
    prof = profile(mbpp_program)
    assert prof.trace_length <= prof.trace_length_micro


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_dynamic_never_exceeds_static(seed):
    p = sample_program(FuzzConfig(), f"metrics:{seed}")
    trace = run(p, 200_000)
    if not trace.outcome.terminated:
        return
    stat = static_metrics(p)
    dyn = dynamic_metrics(p, trace)
    assert dyn.taken_if_depth <= stat.max_nested_if
    assert dyn.taken_loop_depth <= stat.max_nested_loop
    assert dyn.trace_length <= dyn.trace_length_micro
