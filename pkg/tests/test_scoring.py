from __future__ import annotations

import pytest

from implang.mutation import SemanticsStyle
from implang.scoring import (
    first_divergence,
    first_mismatch_stats,
    gold_response_text,
    parse_rule_answer,
    parse_state_answer,
    parse_trace_answer,
    score_batch,
    score_pred_rule,
    score_pred_state,
    score_pred_trace,
)
from implang.syntax import parse
from implang.tasks import TIMEOUT_WORD, build_instance


GOLD_STATE = {
    "kind": "state",
    "state": {"a": "10", "b": "23", "c": "12", "ans": "33"},
    "assigned": ["a", "b", "c", "ans"],
}


def answer_block(state: dict[str, str]) -> str:
    rows = "\n".join(f"  <{k}>{v}</{k}>" for k, v in state.items())
    return f"<answer>\n{rows}\n</answer>"


def test_parse_state_answer_round_trip():
    parsed = parse_state_answer(answer_block(GOLD_STATE["state"]))
    assert parsed.kind == "state"
    assert parsed.state == GOLD_STATE["state"]


def test_parse_state_tolerates_plus_and_whitespace():
    parsed = parse_state_answer("<answer><a> +10 </a></answer>")
    assert parsed.state == {"a": "10"}


def test_parse_special_words():
    assert parse_state_answer("<answer>##timeout##</answer>").kind == "timeout"
    assert parse_state_answer("<answer>##error##</answer>").kind == "error"


def test_parse_malformed_never_raises():
    assert parse_state_answer("garbage").kind == "malformed"
    assert parse_state_answer("<answer><a>oops</a></answer>").kind == "malformed"
    assert parse_rule_answer("<ans><answer id='x'></answer></ans>").kind == "malformed"
    assert parse_trace_answer("<answer><step></step></answer>").kind == "malformed"


def test_parse_uses_outermost_block():
    text = "preamble <answer><a>1</a></answer> postamble <answer>"
    parsed = parse_state_answer(text)
    assert parsed.kind == "state" and parsed.state == {"a": "1"}


def test_score_state_exact():
    exact, fraction = score_pred_state(
        parse_state_answer(answer_block(GOLD_STATE["state"])), GOLD_STATE
    )
    assert exact and fraction == 1.0


def test_score_state_partial_fraction():
    wrong = dict(GOLD_STATE["state"], ans="0")
    exact, fraction = score_pred_state(parse_state_answer(answer_block(wrong)), GOLD_STATE)
    assert not exact and fraction == 0.75


def test_score_state_extra_variable_is_inexact():
    extra = dict(GOLD_STATE["state"], zz="1")
    exact, fraction = score_pred_state(parse_state_answer(answer_block(extra)), GOLD_STATE)
    assert not exact and fraction == 1.0


def test_score_state_timeout_answer_vs_state_gold():
    exact, fraction = score_pred_state(
        parse_state_answer(f"<answer>{TIMEOUT_WORD}</answer>"), GOLD_STATE
    )
    assert (exact, fraction) == (False, 0.0)


def test_score_state_timeout_gold():
    gold = {"kind": "special", "word": TIMEOUT_WORD}
    exact, fraction = score_pred_state(
        parse_state_answer(f"<answer>{TIMEOUT_WORD}</answer>"), gold
    )
    assert exact and fraction == 1.0
    exact, _ = score_pred_state(parse_state_answer(answer_block({"a": "1"})), gold)
    assert not exact


def rule_response(sequences: dict[int, list[int]]) -> str:
    parts = ["<ans>"]
    for qid, rules in sequences.items():
        parts.append(f'<answer id="{qid}">')
        parts.extend(f"<rule>{r}</rule>" for r in rules)
        parts.append("</answer>")
    parts.append("</ans>")
    return "\n".join(parts)


GOLD_QUESTIONS = [
    {"id": 1, "gold": [67, 68, 32, 1, 35, 69]},
    {"id": 2, "gold": [3]},
]


def test_score_rule_exact_and_order():
    answer = parse_rule_answer(rule_response({1: [67, 68, 32, 1, 35, 69], 2: [3]}))
    assert score_pred_rule(answer, GOLD_QUESTIONS) == [True, True]
    shuffled = parse_rule_answer(rule_response({1: [68, 67, 32, 1, 35, 69], 2: [3]}))
    assert score_pred_rule(shuffled, GOLD_QUESTIONS) == [False, True]
    missing = parse_rule_answer(rule_response({2: [3]}))
    assert score_pred_rule(missing, GOLD_QUESTIONS) == [False, True]


def test_score_trace_self_and_perturbations(trace_example):
    inst = build_instance("t", parse("int a;\na = 1;\n"), "trace", SemanticsStyle.SOS)
    gold_xml = inst.gold["xml"]
    assert score_pred_trace(parse_trace_answer(gold_xml), gold_xml)
    # whitespace and reordered state tags are normalized away
    squashed = gold_xml.replace("\n", "").replace("    ", "")
    assert score_pred_trace(parse_trace_answer(squashed), gold_xml)
    missing_step = gold_xml.rsplit("<step>", 1)[0] + "</answer>"
    assert not score_pred_trace(parse_trace_answer(missing_step), gold_xml)
    off_by_one = gold_xml.replace("<a>1</a>", "<a>2</a>", 1)
    assert not score_pred_trace(parse_trace_answer(off_by_one), gold_xml)


def test_first_divergence():
    assert first_divergence([1, 2, 3], [1, 2, 3]) is None
    assert first_divergence([1, 2, 3], [1, 9, 3]) == 1
    assert first_divergence([1, 2, 3], [1, 2]) == 2
    assert first_divergence([1, 2], [1, 2, 3]) == 2


def test_first_mismatch_rates_synthetic_corpus():
    # Independent recount: rule 67 opens three gold sequences and is the first
    # divergence once -> rate 1/3.  Rule 3 occurs twice, never first -> 0.
    results = [
        ([67, 68, 30], [67, 68, 30]),
        ([67, 68, 30], [99, 68, 30]),  # diverges at position 0 -> rule 67
        ([67, 68, 31], [67, 68, 31]),
        ([3], [3]),
        ([3, 5], [3, 9]),  # diverges at position 1 -> rule 5
    ]
    rates, categories = first_mismatch_stats(results, "sos")
    assert rates[67] == pytest.approx(1 / 3)
    assert rates[3] == 0.0
    assert rates[5] == pytest.approx(1.0)
    assert rates[68] == 0.0
    # category rate is the max over member rules
    assert categories["Loop"] == pytest.approx(1 / 3)
    assert categories["Assignment"] == pytest.approx(1.0)


def test_all_correct_rates_are_zero():
    results = [([1, 2, 3], [1, 2, 3]), ([7], [7])]
    rates, categories = first_mismatch_stats(results, "sos")
    assert all(v == 0.0 for v in rates.values())
    assert all(v == 0.0 for v in categories.values())


def test_prediction_longer_than_gold_is_inexact_but_unattributed():
    results = [([3], [3, 5])]
    rates, _ = first_mismatch_stats(results, "sos")
    assert rates[3] == 0.0  # divergence is past the gold's end


def test_scoring_is_idempotent(mbpp_program):
    inst = build_instance("m", mbpp_program, "state", SemanticsStyle.SOS)
    responses = {inst.instance_id: gold_response_text(inst)}
    first = score_batch([inst], responses)
    second = score_batch([inst], responses)
    assert first.accuracy == second.accuracy == 1.0
    assert first.per_instance == second.per_instance


def test_full_fraction_with_matching_variable_set_implies_exact():
    """Fuzzed programs assign every declared variable, so a fraction of 1.0
    with the right variable set can only be the exact answer."""
    from implang.fuzzer import FuzzConfig, sample_program

    for i in range(5):
        p = sample_program(FuzzConfig(), f"frac:{i}")
        inst = build_instance(f"f{i}", p, "state", SemanticsStyle.SOS)
        if inst.gold["kind"] != "state":
            continue
        assert set(inst.gold["assigned"]) == set(inst.gold["state"])
        exact, fraction = score_pred_state(
            parse_state_answer(gold_response_text(inst)), inst.gold
        )
        assert exact and fraction == 1.0


def test_gold_responses_score_perfectly(mbpp_program):
    for task in ("state", "rule", "trace"):
        inst = build_instance("m", mbpp_program, task, SemanticsStyle.SOS, seed=2)
        report = score_batch([inst], {inst.instance_id: gold_response_text(inst)})
        assert report.accuracy == 1.0, task
        if task == "rule":
            assert all(v == 0.0 for v in report.category_rates.values())
        if task == "state":
            assert report.var_fraction == 1.0
